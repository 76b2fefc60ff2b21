#include "sobmom/version.hpp"

namespace sobmom {
const char* version() { return "0.1.0"; }
}
