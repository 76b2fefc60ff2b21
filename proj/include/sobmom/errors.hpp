#pragma once

#include <stdexcept>
#include <string>

namespace sobmom {

// A structural invariant of a domain type was violated (non-hermitian
// input, negative atomic mass, ...).
struct invariant_error : std::logic_error {
    explicit invariant_error(const std::string& what) : std::logic_error(what) {}
};

// Data does not cover the degree / truncation a computation needs.
struct degree_error : std::invalid_argument {
    explicit degree_error(const std::string& what) : std::invalid_argument(what) {}
};

// Operation not available on the current scalar backend.
struct unsupported_error : std::logic_error {
    explicit unsupported_error(const std::string& what) : std::logic_error(what) {}
};

// A model precondition failed at run time (PSD failure, unsaturated rank, ...).
struct model_error : std::runtime_error {
    explicit model_error(const std::string& what) : std::runtime_error(what) {}
};

// Bad external input (JSON schema, CLI arguments).
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sobmom
