#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "sobmom/linalg.hpp"
#include "sobmom/matrix.hpp"

namespace sobmom {

template <class S>
struct AtomicBase {
    using real_t = typename field<S>::real_t;
    struct Atom {
        real_t t;
        real_t mass;  // nonnegative
    };
    std::vector<Atom> atoms;
};

template <class S>
struct GaussianBase {
    typename field<S>::real_t variance;  // positive; mean is fixed at 0
};

/// One summand of a matrix measure: (base measure) x (polynomial density)
/// x (constant hermitian 2x2 matrix).
template <class S>
struct MeasureTerm {
    using real_t = typename field<S>::real_t;

    std::variant<AtomicBase<S>, GaussianBase<S>> base;
    std::vector<real_t> density_poly;  // c_0..c_d, defaults to {1}
    Matrix<S> matrix;                  // 2x2 hermitian

    MeasureTerm(std::variant<AtomicBase<S>, GaussianBase<S>> b, std::vector<real_t> density,
                Matrix<S> mat)
        : base(std::move(b)), density_poly(std::move(density)), matrix(std::move(mat)) {
        if (density_poly.empty()) density_poly.push_back(real_t(1));
        if (matrix.rows() != 2 || matrix.cols() != 2)
            throw invariant_error("MeasureTerm: matrix must be 2x2");
        if (!is_hermitian(matrix, 1e-12))
            throw invariant_error("MeasureTerm: matrix must be hermitian");
        if (const auto* at = std::get_if<AtomicBase<S>>(&base)) {
            for (const auto& a : at->atoms)
                if (a.mass < real_t(0)) throw invariant_error("MeasureTerm: negative atomic mass");
        } else {
            if (std::get<GaussianBase<S>>(base).variance <= real_t(0))
                throw invariant_error("MeasureTerm: gaussian variance must be positive");
        }
    }
};

/// 2x2 matrix measure given as a finite sum of terms; the only source of
/// moment data in the toolkit.
template <class S>
struct MatrixMeasure {
    std::vector<MeasureTerm<S>> terms;

    explicit MatrixMeasure(std::vector<MeasureTerm<S>> t) : terms(std::move(t)) {
        if (terms.empty()) throw invariant_error("MatrixMeasure: needs at least one term");
    }
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> warnings;
};

/// The four scalar moment sequences h_ij(k), 0 <= k <= K.
template <class S>
struct MomentQuad {
    int K = -1;
    std::array<Vec<S>, 4> h;  // h[2*i+j][k]

    MomentQuad() = default;
    explicit MomentQuad(int degree)
        : K(degree) {
        for (auto& seq : h) seq.assign(static_cast<std::size_t>(K) + 1, field<S>::zero());
    }

    const S& at(int i, int j, int k) const { return h[2 * i + j][static_cast<std::size_t>(k)]; }
    S& at(int i, int j, int k) { return h[2 * i + j][static_cast<std::size_t>(k)]; }

    Matrix<S> matrix_at(int k) const {
        Matrix<S> m(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m(i, j) = at(i, j, k);
        return m;
    }

    bool hermitian() const {
        for (int k = 0; k <= K; ++k) {
            if constexpr (field<S>::exact) {
                if (at(0, 1, k) != field<S>::conj(at(1, 0, k))) return false;
                if (!field<S>::is_real(at(0, 0, k)) || !field<S>::is_real(at(1, 1, k)))
                    return false;
            } else {
                double scale = 1.0;
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        scale = std::max(scale, field<S>::abs_approx(at(i, j, k)));
                if (field<S>::abs_approx(at(0, 1, k) - field<S>::conj(at(1, 0, k))) >
                    1e-12 * scale)
                    return false;
                if (std::abs(field<S>::im(at(0, 0, k))) > 1e-12 * scale ||
                    std::abs(field<S>::im(at(1, 1, k))) > 1e-12 * scale)
                    return false;
            }
        }
        return true;
    }
};

namespace detail {

// (2n-1)!! as an exact integer.
inline mpz_class double_factorial_odd(long n) {
    mpz_class acc = 1;
    for (long i = 1; i <= n; ++i) acc *= 2 * i - 1;
    return acc;
}

template <class S>
typename field<S>::real_t raw_base_moment(const std::variant<AtomicBase<S>, GaussianBase<S>>& base,
                                          long k) {
    using real_t = typename field<S>::real_t;
    if (const auto* at = std::get_if<AtomicBase<S>>(&base)) {
        real_t acc(0);
        for (const auto& a : at->atoms) {
            real_t p(1);
            for (long i = 0; i < k; ++i) p *= a.t;
            acc += a.mass * p;
        }
        return acc;
    }
    const auto& g = std::get<GaussianBase<S>>(base);
    if (k % 2 == 1) return real_t(0);
    const long n = k / 2;
    real_t p(1);
    for (long i = 0; i < n; ++i) p *= g.variance;
    const mpz_class df = double_factorial_odd(n);
    if constexpr (field<S>::exact)
        return real_t(mpq_class(df)) * p;
    else
        return df.get_d() * p;
}

}  // namespace detail

/// k-th power moment of a single term's scalar measure (density included).
template <class S>
typename field<S>::real_t term_scalar_moment(const MeasureTerm<S>& term, long k) {
    typename field<S>::real_t acc(0);
    for (std::size_t l = 0; l < term.density_poly.size(); ++l) {
        if (term.density_poly[l] == 0) continue;
        acc += term.density_poly[l] *
               detail::raw_base_moment<S>(term.base, k + static_cast<long>(l));
    }
    return acc;
}

/// h(k) = sum over terms of matrix * (k-th scalar moment of the term).
template <class S>
Matrix<S> moment(const MatrixMeasure<S>& mu, long k) {
    if (k < 0) throw std::invalid_argument("moment: negative degree");
    Matrix<S> h(2, 2);
    for (const auto& term : mu.terms) {
        const S w = field<S>::from_real(term_scalar_moment(term, k));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) h(i, j) += term.matrix(i, j) * w;
    }
    return h;
}

/// Sufficient positive-definiteness check: every term matrix PSD, every
/// density polynomial even with nonnegative coefficients. `force` downgrades
/// failures to warnings.
template <class S>
ValidationReport validate(const MatrixMeasure<S>& mu, bool force = false) {
    ValidationReport rep;
    std::size_t idx = 0;
    for (const auto& term : mu.terms) {
        auto verdict = psd_check(HermMatrix<S>(term.matrix), 1e-12);
        if (!verdict.psd)
            rep.warnings.push_back("term " + std::to_string(idx) +
                                   ": matrix is not positive semidefinite");
        for (std::size_t l = 0; l < term.density_poly.size(); ++l) {
            if (l % 2 == 1 && term.density_poly[l] != 0) {
                rep.warnings.push_back("term " + std::to_string(idx) +
                                       ": odd density coefficient c_" + std::to_string(l));
            } else if (l % 2 == 0 && term.density_poly[l] < 0) {
                rep.warnings.push_back("term " + std::to_string(idx) +
                                       ": negative density coefficient c_" + std::to_string(l));
            }
        }
        ++idx;
    }
    rep.ok = rep.warnings.empty() || force;
    return rep;
}

/// Tabulate h(k) for k = 0..K.
template <class S>
MomentQuad<S> moment_quad(const MatrixMeasure<S>& mu, int K) {
    if (K < 0) throw std::invalid_argument("moment_quad: negative degree");
    MomentQuad<S> q(K);
    for (int k = 0; k <= K; ++k) {
        const Matrix<S> m = moment(mu, k);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) q.at(i, j, k) = m(i, j);
    }
    if constexpr (field<S>::exact) {
        if (!q.hermitian())
            throw invariant_error("moment_quad: hermitian symmetry violated");
    }
    return q;
}

}  // namespace sobmom
