#pragma once

#include <cassert>
#include <cstddef>
#include <utility>
#include <vector>

#include "sobmom/errors.hpp"
#include "sobmom/scalar.hpp"

namespace sobmom {

template <class S>
using Vec = std::vector<S>;

/// Dense row-major matrix over either scalar backend.
template <class S>
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, field<S>::zero()) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = field<S>::one();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    S& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    const S& operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Matrix adjoint() const {
        Matrix a(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) a(j, i) = field<S>::conj((*this)(i, j));
        return a;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Vec<S> row(std::size_t i) const {
        Vec<S> r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }
    Vec<S> col(std::size_t j) const {
        Vec<S> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    double max_abs() const {
        double m = 0.0;
        for (const S& v : data_) m = std::max(m, field<S>::abs_approx(v));
        return m;
    }

  private:
    std::size_t rows_, cols_;
    std::vector<S> data_;
};

template <class S>
Matrix<S> operator*(const Matrix<S>& a, const Matrix<S>& b) {
    assert(a.cols() == b.rows());
    Matrix<S> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (field<S>::is_zero(a(i, k))) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

template <class S>
Matrix<S> operator+(const Matrix<S>& a, const Matrix<S>& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    Matrix<S> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

template <class S>
Matrix<S> operator-(const Matrix<S>& a, const Matrix<S>& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    Matrix<S> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

template <class S>
Vec<S> operator*(const Matrix<S>& a, const Vec<S>& x) {
    assert(a.cols() == x.size());
    Vec<S> y(a.rows(), field<S>::zero());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

// <x, y> = sum x_i conj(y_i); linear in the first argument throughout the library.
template <class S>
S dot_c(const Vec<S>& x, const Vec<S>& y) {
    assert(x.size() == y.size());
    S acc = field<S>::zero();
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * field<S>::conj(y[i]);
    return acc;
}

template <class S>
typename field<S>::real_t norm2(const Vec<S>& x) {
    typename field<S>::real_t acc{};
    for (const S& v : x) acc += field<S>::abs2(v);
    return acc;
}

template <class S>
bool is_hermitian(const Matrix<S>& m, double rel_tol = 0.0) {
    if (m.rows() != m.cols()) return false;
    if constexpr (field<S>::exact) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = i; j < m.cols(); ++j)
                if (m(i, j) != field<S>::conj(m(j, i))) return false;
        return true;
    } else {
        const double scale = std::max(1.0, m.max_abs());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = i; j < m.cols(); ++j)
                if (field<S>::abs_approx(m(i, j) - field<S>::conj(m(j, i))) > rel_tol * scale)
                    return false;
        return true;
    }
}

/// Matrix with the hermitian invariant asserted on construction.
template <class S>
struct HermMatrix {
    Matrix<S> m;

    HermMatrix() = default;
    explicit HermMatrix(Matrix<S> mat, double rel_tol = 1e-12) : m(std::move(mat)) {
        if (!is_hermitian(m, field<S>::exact ? 0.0 : rel_tol))
            throw invariant_error("HermMatrix: input is not hermitian");
    }

    std::size_t dim() const { return m.rows(); }
};

template <class S>
Matrix<FloatComplex> to_float(const Matrix<S>& m) {
    Matrix<FloatComplex> f(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) f(i, j) = field<S>::to_cd(m(i, j));
    return f;
}

}  // namespace sobmom
