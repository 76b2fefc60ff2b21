#pragma once

#include "sobmom/linalg.hpp"
#include "sobmom/measures.hpp"

namespace sobmom {

/// Square truncation of a Sobolev moment bisequence: s(m,n) for 0 <= m,n <= L.
template <class S>
struct Bisequence {
    int L = -1;
    Matrix<S> values;            // (L+1) x (L+1), row m, column n
    bool hermitian_case = false; // s(m,n) = conj(s(n,m))

    Bisequence() = default;
    explicit Bisequence(Matrix<S> v)
        : L(static_cast<int>(v.rows()) - 1), values(std::move(v)) {
        if (values.rows() != values.cols())
            throw invariant_error("Bisequence: values must be square");
        hermitian_case = is_hermitian(values, 1e-12);
    }

    const S& at(int m, int n) const {
        return values(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
    }
};

/// s(m,n) = h00(m+n) + m h10(m+n-1) + n h01(m+n-1) + mn h11(m+n-2);
/// entries with a negative argument contribute 0.
template <class S>
Bisequence<S> generate(const MomentQuad<S>& q, int L) {
    if (L < 0) throw std::invalid_argument("generate: negative truncation");
    if (q.K < 2 * L) throw degree_error("generate: quad covers degree " + std::to_string(q.K) +
                                        ", need " + std::to_string(2 * L));
    Matrix<S> v(static_cast<std::size_t>(L) + 1, static_cast<std::size_t>(L) + 1);
    for (int m = 0; m <= L; ++m) {
        for (int n = 0; n <= L; ++n) {
            S acc = q.at(0, 0, m + n);
            if (m > 0) acc += field<S>::from_int(m) * q.at(1, 0, m + n - 1);
            if (n > 0) acc += field<S>::from_int(n) * q.at(0, 1, m + n - 1);
            if (m > 0 && n > 0)
                acc += field<S>::from_int(static_cast<long>(m) * n) * q.at(1, 1, m + n - 2);
            v(static_cast<std::size_t>(m), static_cast<std::size_t>(n)) = acc;
        }
    }
    Bisequence<S> s;
    s.L = L;
    s.values = std::move(v);
    s.hermitian_case = q.hermitian();
    return s;
}

template <class S>
struct HeltonReport {
    Matrix<S> residuals;        // residual(m,n) for 0 <= m,n <= L-3
    double max_residual = 0.0;  // max |residual| (exactly 0.0 when all vanish exactly)
    bool pass = false;
};

namespace detail {

template <class S>
S helton_residual_at(const Bisequence<S>& s, int m, int n) {
    const S three = field<S>::from_int(3);
    return s.at(m + 3, n) - three * s.at(m + 2, n + 1) + three * s.at(m + 1, n + 2) -
           s.at(m, n + 3);
}

}  // namespace detail

/// Serial reference for the residual grid; kept for tests and benchmarks.
template <class S>
Matrix<S> helton_residual_grid_serial(const Bisequence<S>& s) {
    const int span = s.L - 2;  // residual defined for m,n <= L-3
    Matrix<S> grid(static_cast<std::size_t>(span), static_cast<std::size_t>(span));
    for (int m = 0; m < span; ++m)
        for (int n = 0; n < span; ++n)
            grid(static_cast<std::size_t>(m), static_cast<std::size_t>(n)) =
                detail::helton_residual_at(s, m, n);
    return grid;
}

/// Residual grid of the third-difference identity; cells are independent,
/// computed in parallel.
template <class S>
Matrix<S> helton_residual_grid(const Bisequence<S>& s) {
    const int span = s.L - 2;
    Matrix<S> grid(static_cast<std::size_t>(span), static_cast<std::size_t>(span));
#pragma omp parallel for collapse(2) schedule(static)
    for (int m = 0; m < span; ++m)
        for (int n = 0; n < span; ++n)
            grid(static_cast<std::size_t>(m), static_cast<std::size_t>(n)) =
                detail::helton_residual_at(s, m, n);
    return grid;
}

/// Check s(m+3,n) - 3s(m+2,n+1) + 3s(m+1,n+2) - s(m,n+3) = 0 on every cell
/// that fits the truncation. Exact backend passes only on exact zero.
template <class S>
HeltonReport<S> helton_check(const Bisequence<S>& s) {
    if (s.L < 3) throw degree_error("helton_check: needs truncation degree >= 3");
    HeltonReport<S> rep;
    rep.residuals = helton_residual_grid(s);
    bool all_zero = true;
    double max_abs = 0.0;
    for (std::size_t m = 0; m < rep.residuals.rows(); ++m)
        for (std::size_t n = 0; n < rep.residuals.cols(); ++n) {
            const S& r = rep.residuals(m, n);
            if (!field<S>::is_zero(r)) all_zero = false;
            max_abs = std::max(max_abs, field<S>::abs_approx(r));
        }
    rep.max_residual = all_zero ? 0.0 : max_abs;
    if constexpr (field<S>::exact)
        rep.pass = all_zero;
    else
        rep.pass = max_abs <= 1e-10 * std::max(1.0, s.values.max_abs());
    return rep;
}

/// PSD check of the matrix [s(m,n)]; defined only in the hermitian case.
template <class S>
PsdVerdict<S> bisequence_psd_check(const Bisequence<S>& s, double tol = 0.0) {
    if (!s.hermitian_case)
        throw invariant_error("bisequence_psd_check: bisequence is not hermitian");
    return psd_check(HermMatrix<S>(s.values, 1e-9), tol);
}

}  // namespace sobmom
