#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "sobmom/errors.hpp"
#include "sobmom/matrix.hpp"

namespace sobmom {

struct EigResult {
    std::vector<double> values;      // ascending
    Matrix<FloatComplex> vectors;    // orthonormal columns, vectors.col(k) <-> values[k]
};

/// Cyclic Jacobi for hermitian complex matrices. Dimensions here are small
/// (a few dozen at most), so quadratic sweeps are fine.
inline EigResult jacobi_eig(Matrix<FloatComplex> a) {
    const std::size_t n = a.rows();
    EigResult out;
    out.vectors = Matrix<FloatComplex>::identity(n);
    if (n == 0) return out;

    double frob2 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) frob2 += std::norm(a(i, j));
    const double stop = frob2 * 1e-30;

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off2 = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off2 += std::norm(a(p, q));
        if (off2 <= stop) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const FloatComplex apq = a(p, q);
                const double r = std::abs(apq);
                if (r == 0.0) continue;
                const FloatComplex phase = apq / r;  // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double zeta = (aqq - app) / (2.0 * r);
                const double sgn = zeta >= 0.0 ? 1.0 : -1.0;
                const double t = -sgn / (std::abs(zeta) + std::sqrt(zeta * zeta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const FloatComplex akp = a(k, p);
                    const FloatComplex akq = a(k, q);
                    a(k, p) = c * akp + s * std::conj(phase) * akq;
                    a(k, q) = -s * phase * akp + c * akq;
                    a(p, k) = std::conj(a(k, p));
                    a(q, k) = std::conj(a(k, q));
                }
                a(p, p) = {app * c * c + 2.0 * r * c * s + aqq * s * s, 0.0};
                a(q, q) = {app * s * s - 2.0 * r * c * s + aqq * c * c, 0.0};
                a(p, q) = {0.0, 0.0};
                a(q, p) = {0.0, 0.0};

                for (std::size_t k = 0; k < n; ++k) {
                    const FloatComplex vkp = out.vectors(k, p);
                    const FloatComplex vkq = out.vectors(k, q);
                    out.vectors(k, p) = c * vkp + s * std::conj(phase) * vkq;
                    out.vectors(k, q) = -s * phase * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
    out.values.resize(n);
    Matrix<FloatComplex> v(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) v(i, k) = out.vectors(i, order[k]);
    }
    out.vectors = std::move(v);
    return out;
}

/// Spectral decomposition of a hermitian matrix; float backend only.
template <class S>
EigResult eig_hermitian(const HermMatrix<S>& h) {
    if constexpr (field<S>::exact)
        throw unsupported_error("eig_hermitian: not available on the exact backend");
    else
        return jacobi_eig(h.m);
}

struct SvdResult {
    std::vector<double> sigma;       // ascending
    Matrix<FloatComplex> v;          // right singular vectors, columns
    Matrix<FloatComplex> av;         // A * v; column k has norm sigma[k]
};

/// One-sided Jacobi SVD (right vectors only). Works directly on the columns
/// of A, so small singular values come out with absolute accuracy ~eps*sigma_max
/// instead of the sqrt(eps) loss of the normal equations.
inline SvdResult svd_jacobi(Matrix<FloatComplex> w) {
    const std::size_t m = w.rows(), n = w.cols();
    SvdResult out;
    out.v = Matrix<FloatComplex>::identity(n);
    if (n == 0) {
        out.av = std::move(w);
        return out;
    }

    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double a = 0.0, b = 0.0;
                FloatComplex g = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    a += std::norm(w(i, p));
                    b += std::norm(w(i, q));
                    g += std::conj(w(i, p)) * w(i, q);
                }
                const double r = std::abs(g);
                if (a == 0.0 || b == 0.0 || r <= 1e-15 * std::sqrt(a * b)) continue;
                rotated = true;
                const FloatComplex phase = g / r;
                const double zeta = (b - a) / (2.0 * r);
                const double sgn = zeta >= 0.0 ? 1.0 : -1.0;
                const double t = -sgn / (std::abs(zeta) + std::sqrt(zeta * zeta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < m; ++i) {
                    const FloatComplex wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp + s * std::conj(phase) * wq;
                    w(i, q) = -s * phase * wp + c * wq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const FloatComplex vp = out.v(i, p), vq = out.v(i, q);
                    out.v(i, p) = c * vp + s * std::conj(phase) * vq;
                    out.v(i, q) = -s * phase * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sig(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += std::norm(w(i, k));
        sig[k] = std::sqrt(acc);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return sig[i] < sig[j]; });
    out.sigma.resize(n);
    Matrix<FloatComplex> vs(n, n), ws(m, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.sigma[k] = sig[order[k]];
        for (std::size_t i = 0; i < n; ++i) vs(i, k) = out.v(i, order[k]);
        for (std::size_t i = 0; i < m; ++i) ws(i, k) = w(i, order[k]);
    }
    out.v = std::move(vs);
    out.av = std::move(ws);
    return out;
}

// ---------------------------------------------------------------------------
// Exact row reduction

template <class S>
struct RrefResult {
    Matrix<S> r;
    std::vector<std::size_t> pivot_cols;
};

// Gauss-Jordan with exact zero tests; pivot row chosen by largest magnitude
// for determinism. Intended for the exact backend.
template <class S>
RrefResult<S> rref(Matrix<S> a) {
    const std::size_t m = a.rows(), n = a.cols();
    RrefResult<S> out;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t piv = m;
        double best = -1.0;
        for (std::size_t i = row; i < m; ++i) {
            if (field<S>::is_zero(a(i, col))) continue;
            const double mag = field<S>::abs_approx(a(i, col));
            if (mag > best) {
                best = mag;
                piv = i;
            }
        }
        if (piv == m) continue;
        if (piv != row)
            for (std::size_t j = 0; j < n; ++j) std::swap(a(row, j), a(piv, j));
        const S inv = field<S>::one() / a(row, col);
        for (std::size_t j = col; j < n; ++j) a(row, j) = a(row, j) * inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || field<S>::is_zero(a(i, col))) continue;
            const S f = a(i, col);
            for (std::size_t j = col; j < n; ++j) a(i, j) = a(i, j) - f * a(row, j);
        }
        out.pivot_cols.push_back(col);
        ++row;
    }
    out.r = std::move(a);
    return out;
}

template <class S>
std::size_t exact_rank(const Matrix<S>& a) {
    static_assert(field<S>::exact, "exact_rank requires the exact backend");
    return rref(a).pivot_cols.size();
}

// Exact inverse of a nonsingular square matrix.
template <class S>
Matrix<S> invert(const Matrix<S>& a) {
    const std::size_t n = a.rows();
    Matrix<S> aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = field<S>::one();
    }
    auto rr = rref(std::move(aug));
    if (rr.pivot_cols.size() != n || rr.pivot_cols.back() != n - 1)
        throw invariant_error("invert: singular matrix");
    Matrix<S> inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = rr.r(i, n + j);
    return inv;
}

// ---------------------------------------------------------------------------
// Positive semidefiniteness

template <class S>
struct PsdVerdict {
    bool psd = false;
    double min_eigenvalue = 0.0;
    std::optional<Vec<S>> witness;  // x with x*Hx < 0 when psd is false
    // Exact backend diagnostic: smallest |pivot| met during elimination
    // (0 when the failure came from a zero diagonal with nonzero row).
    double min_pivot_abs = std::numeric_limits<double>::infinity();
};

namespace detail {

// Hermitian congruence elimination with exact sign tests. Produces an exact
// PSD/not-PSD decision plus a witness vector on failure.
template <class S>
PsdVerdict<S> psd_check_exact(const Matrix<S>& h) {
    const std::size_t n = h.rows();
    PsdVerdict<S> v;
    v.psd = true;

    Matrix<S> w = h;
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), 0);

    struct Step {
        std::size_t idx;          // eliminated index (original numbering)
        S pivot;                  // positive real pivot
        std::vector<std::size_t> rest;  // active indices after removal
        Vec<S> col;               // w(j, idx) for j in rest
    };
    std::vector<Step> steps;

    auto unwind = [&](Vec<S> y_full) {
        // y_full indexed over original 0..n-1, supported on the current active set.
        for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
            S acc = field<S>::zero();
            for (std::size_t k = 0; k < it->rest.size(); ++k)
                acc += field<S>::conj(it->col[k]) * y_full[it->rest[k]];
            y_full[it->idx] = (field<S>::zero() - acc) / it->pivot;
        }
        return y_full;
    };

    while (!active.empty()) {
        // Any negative diagonal kills PSD outright.
        std::size_t neg = n, pos = n;
        double pos_best = -1.0;
        for (std::size_t i : active) {
            const S d = w(i, i);
            if (!field<S>::is_real(d))
                throw invariant_error("psd_check: non-real diagonal on hermitian input");
            const auto dr = field<S>::re(d);
            if (dr < 0) {
                neg = i;
                break;
            }
            if (dr > 0) {
                const double mag = field<S>::abs_approx(d);
                if (mag > pos_best) {
                    pos_best = mag;
                    pos = i;
                }
            }
        }
        if (neg != n) {
            v.psd = false;
            v.min_pivot_abs = std::min(v.min_pivot_abs, field<S>::abs_approx(w(neg, neg)));
            Vec<S> y(n, field<S>::zero());
            y[neg] = field<S>::one();
            v.witness = unwind(std::move(y));
            break;
        }
        if (pos == n) {
            // All remaining diagonals vanish: PSD forces the rows to vanish too.
            std::size_t bi = n, bj = n;
            for (std::size_t a = 0; a < active.size() && bi == n; ++a)
                for (std::size_t b = a + 1; b < active.size(); ++b)
                    if (!field<S>::is_zero(w(active[a], active[b]))) {
                        bi = active[a];
                        bj = active[b];
                        break;
                    }
            if (bi == n) break;  // zero block, PSD
            v.psd = false;
            v.min_pivot_abs = 0.0;
            Vec<S> y(n, field<S>::zero());
            y[bi] = field<S>::one();
            y[bj] = field<S>::zero() - field<S>::conj(w(bi, bj));
            v.witness = unwind(std::move(y));
            break;
        }

        Step st;
        st.idx = pos;
        st.pivot = w(pos, pos);
        v.min_pivot_abs = std::min(v.min_pivot_abs, field<S>::abs_approx(st.pivot));
        for (std::size_t j : active)
            if (j != pos) {
                st.rest.push_back(j);
                st.col.push_back(w(j, pos));
            }
        // Schur complement on the remaining block.
        for (std::size_t a = 0; a < st.rest.size(); ++a)
            for (std::size_t b = 0; b < st.rest.size(); ++b)
                w(st.rest[a], st.rest[b]) =
                    w(st.rest[a], st.rest[b]) - st.col[a] * field<S>::conj(st.col[b]) / st.pivot;
        active = st.rest;
        steps.push_back(std::move(st));
    }
    return v;
}

}  // namespace detail

/// PSD verdict for a hermitian matrix. Exact backend decides by congruence
/// elimination (tol ignored); float backend thresholds the spectrum at
/// -max(tol * max(1, |lambda|_max), 1e-12).
template <class S>
PsdVerdict<S> psd_check(const HermMatrix<S>& h, double tol = 0.0) {
    if (tol < 0) throw std::invalid_argument("psd_check: negative tolerance");
    const std::size_t n = h.dim();
    PsdVerdict<S> v;
    if (n == 0) {
        v.psd = true;
        return v;
    }
    if constexpr (field<S>::exact) {
        v = detail::psd_check_exact(h.m);
        auto eig = jacobi_eig(to_float(h.m));
        v.min_eigenvalue = eig.values.front();
    } else {
        auto eig = jacobi_eig(h.m);
        v.min_eigenvalue = eig.values.front();
        const double lam_max = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
        const double thresh = std::max(tol * std::max(1.0, lam_max), 1e-12);
        v.psd = v.min_eigenvalue >= -thresh;
        if (!v.psd) v.witness = eig.vectors.col(0);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Null spaces and least squares

/// Basis of the right null space. Exact backend: exact vectors from the RREF.
/// Float backend: eigenvectors of A*A with singular value < 1e-10 * sigma_max.
template <class S>
std::vector<Vec<S>> kernel_basis(const Matrix<S>& a) {
    const std::size_t n = a.cols();
    std::vector<Vec<S>> basis;
    if constexpr (field<S>::exact) {
        auto rr = rref(a);
        std::vector<bool> is_pivot(n, false);
        for (std::size_t c : rr.pivot_cols) is_pivot[c] = true;
        for (std::size_t f = 0; f < n; ++f) {
            if (is_pivot[f]) continue;
            Vec<S> x(n, field<S>::zero());
            x[f] = field<S>::one();
            for (std::size_t r = 0; r < rr.pivot_cols.size(); ++r)
                x[rr.pivot_cols[r]] = field<S>::zero() - rr.r(r, f);
            basis.push_back(std::move(x));
        }
    } else {
        auto svd = svd_jacobi(a);
        const double smax = svd.sigma.empty() ? 0.0 : svd.sigma.back();
        for (std::size_t k = 0; k < svd.sigma.size(); ++k)
            if (smax == 0.0 || svd.sigma[k] < 1e-10 * smax) basis.push_back(svd.v.col(k));
    }
    return basis;
}

template <class S>
struct LsqResult {
    Vec<S> x;                              // minimum-norm least-squares solution
    typename field<S>::real_t residual2{};  // ||Ax-b||^2, exact on the exact backend
    double residual = 0.0;
};

/// Minimum-Euclidean-norm least-squares solve. Exact backend uses the rank
/// factorization A = CF and the closed-form pseudoinverse
/// F*(FF*)^-1 (C*C)^-1 C*; float backend goes through eig(A*A).
template <class S>
LsqResult<S> min_norm_solve(const Matrix<S>& a, const Vec<S>& b) {
    if (a.rows() != b.size()) throw std::invalid_argument("min_norm_solve: dimension mismatch");
    const std::size_t m = a.rows(), n = a.cols();
    LsqResult<S> out;
    out.x.assign(n, field<S>::zero());

    if constexpr (field<S>::exact) {
        auto rr = rref(a);
        const std::size_t r = rr.pivot_cols.size();
        if (r > 0) {
            Matrix<S> c(m, r);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t k = 0; k < r; ++k) c(i, k) = a(i, rr.pivot_cols[k]);
            Matrix<S> f(r, n);
            for (std::size_t k = 0; k < r; ++k)
                for (std::size_t j = 0; j < n; ++j) f(k, j) = rr.r(k, j);
            const Matrix<S> cs = c.adjoint();
            const Matrix<S> fs = f.adjoint();
            Vec<S> t = cs * b;                    // C* b
            t = invert(cs * c) * t;               // (C*C)^-1 C* b
            t = invert(f * fs) * t;               // (FF*)^-1 ...
            out.x = fs * t;
        }
    } else {
        auto svd = svd_jacobi(a);
        const double smax = svd.sigma.empty() ? 0.0 : svd.sigma.back();
        for (std::size_t k = 0; k < svd.sigma.size(); ++k) {
            const double sk = svd.sigma[k];
            if (smax == 0.0 || sk < 1e-10 * smax) continue;
            // u_k^* b / sigma_k with u_k = (A v_k) / sigma_k
            S uk_b = field<S>::zero();
            for (std::size_t i = 0; i < m; ++i)
                uk_b += field<S>::conj(svd.av(i, k)) * b[i];
            const S coef = uk_b / field<S>::from_real(sk * sk);
            for (std::size_t i = 0; i < n; ++i) out.x[i] += coef * svd.v(i, k);
        }
    }

    Vec<S> res = a * out.x;
    for (std::size_t i = 0; i < m; ++i) res[i] = res[i] - b[i];
    out.residual2 = norm2<S>(res);
    out.residual = std::sqrt(field<S>::real_to_double(out.residual2));
    return out;
}

}  // namespace sobmom
