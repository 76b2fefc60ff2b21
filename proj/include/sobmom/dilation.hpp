#pragma once

#include <string>
#include <vector>

#include "sobmom/bisequence.hpp"
#include "sobmom/linalg.hpp"
#include "sobmom/measures.hpp"

namespace sobmom {

/// Gram matrix of the kernel sections sigma_(n, e_i), n = 0..L: the entry at
/// (row (m,i), column (n,j)) is <sigma_(m,e_i), sigma_(n,e_j)> = h_ij(m+n),
/// with the inner product linear in its first slot. Index (n,i) flattens to
/// 2n+i.
template <class S>
struct FormGram {
    int L = -1;
    Matrix<S> g;

    std::size_t dim() const { return g.rows(); }
};

template <class S>
FormGram<S> build_gram(const MomentQuad<S>& q, int L) {
    if (L < 0) throw std::invalid_argument("build_gram: negative truncation");
    if (q.K < 2 * L)
        throw degree_error("build_gram: quad covers degree " + std::to_string(q.K) + ", need " +
                           std::to_string(2 * L));
    FormGram<S> out;
    out.L = L;
    const std::size_t d = 2 * (static_cast<std::size_t>(L) + 1);
    out.g = Matrix<S>(d, d);
    for (int m = 0; m <= L; ++m)
        for (int i = 0; i < 2; ++i)
            for (int n = 0; n <= L; ++n)
                for (int j = 0; j < 2; ++j)
                    out.g(static_cast<std::size_t>(2 * m + i), static_cast<std::size_t>(2 * n + j)) =
                        q.at(i, j, m + n);
    return out;
}

template <class S>
PsdVerdict<S> form_psd_check(const FormGram<S>& gram, double tol = 1e-9) {
    return psd_check(HermMatrix<S>(gram.g, 1e-9), tol);
}

/// Finite Jordan model: quotient basis of the truncated RKHS plus the
/// compressed shift T, the compressed nilpotent N and the embedding V.
template <class S>
struct JordanModel {
    int L = -1;
    MomentQuad<S> quad;  // source data, degree >= 2L+1
    FormGram<S> gram;

    std::vector<double> gram_eigenvalues;  // ascending, full spectrum
    int rank = 0;
    long rank_exact = -1;  // exact backend cross-check, -1 when unavailable
    bool saturated = false;
    double rank_tol = 1e-10;

    Matrix<FloatComplex> qbasis;  // dim x rank eigencolumns of conj(G)
    std::vector<double> lambda;   // kept eigenvalues, one per column
    Matrix<FloatComplex> tmat;    // rank x rank compressed shift
    Matrix<FloatComplex> nmat;    // rank x rank compressed nilpotent
    Matrix<FloatComplex> vcols;   // rank x 2, columns = coordinates of V e0, V e1
    Matrix<FloatComplex> h0;      // 2x2 = V*V
    double tmat_hermitian_residual = 0.0;
    bool hermitian_quad = false;
};

namespace detail {

inline Matrix<FloatComplex> conj_entries(const Matrix<FloatComplex>& a) {
    Matrix<FloatComplex> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = std::conj(a(i, j));
    return c;
}

inline double frob_norm(const Matrix<FloatComplex>& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) acc += std::norm(a(i, j));
    return std::sqrt(acc);
}

inline Matrix<FloatComplex> mat_pow(const Matrix<FloatComplex>& a, int k) {
    Matrix<FloatComplex> acc = Matrix<FloatComplex>::identity(a.rows());
    for (int i = 0; i < k; ++i) acc = acc * a;
    return acc;
}

// Lambda^{-1/2} Q^* (Gm_X)^T Q Lambda^{-1/2}: the matrix of the operator with
// section-level matrix elements Gm_X[u][v] = <X sigma_u, sigma_v> in the
// orthonormal quotient basis.
inline Matrix<FloatComplex> compress(const Matrix<FloatComplex>& gm_x,
                                     const Matrix<FloatComplex>& qbasis,
                                     const std::vector<double>& lambda) {
    const std::size_t r = lambda.size();
    Matrix<FloatComplex> mid = qbasis.adjoint() * gm_x.transpose() * qbasis;
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = 0; l < r; ++l)
            mid(k, l) /= std::sqrt(lambda[k]) * std::sqrt(lambda[l]);
    return mid;
}

// Diagonal scaling 1/sqrt(H_uu); evens out the huge dynamic range of Hankel
// blocks so the rank cut is decided by geometry, not by entry magnitude.
inline std::vector<double> equilibration(const Matrix<FloatComplex>& h) {
    std::vector<double> d(h.rows(), 1.0);
    for (std::size_t u = 0; u < h.rows(); ++u) {
        const double g = h(u, u).real();
        if (g > 0.0) d[u] = 1.0 / std::sqrt(g);
    }
    return d;
}

inline Matrix<FloatComplex> scale_sym(const Matrix<FloatComplex>& h,
                                      const std::vector<double>& d) {
    Matrix<FloatComplex> s(h.rows(), h.cols());
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j) s(i, j) = d[i] * h(i, j) * d[j];
    return s;
}

// Float rank of a hermitian PSD matrix under the model's relative threshold,
// measured on the equilibrated spectrum.
inline int float_rank(const Matrix<FloatComplex>& h, double rank_tol) {
    if (h.rows() == 0) return 0;
    auto eig = jacobi_eig(scale_sym(h, equilibration(h)));
    const double lam_max = std::max(0.0, eig.values.back());
    if (lam_max <= 0.0) return 0;
    int r = 0;
    for (double v : eig.values)
        if (v > rank_tol * lam_max) ++r;
    return r;
}

}  // namespace detail

/// Build the Jordan model at truncation L. Needs moments to degree 2L+1
/// because the shift compression reads <T sigma_(m,i), sigma_(n,j)> =
/// h_ij(m+n+1) for all section pairs.
template <class S>
JordanModel<S> build_jordan_model(const MomentQuad<S>& q, int L, double rank_tol = 1e-10,
                                  double psd_tol = 1e-9) {
    if (L < 0) throw std::invalid_argument("build_jordan_model: negative truncation");
    if (q.K < 2 * L + 1)
        throw degree_error("build_jordan_model: quad covers degree " + std::to_string(q.K) +
                           ", need " + std::to_string(2 * L + 1));
    JordanModel<S> model;
    model.L = L;
    model.quad = q;
    model.rank_tol = rank_tol;
    model.hermitian_quad = q.hermitian();
    model.gram = build_gram(q, L);

    auto psd = form_psd_check(model.gram, psd_tol);
    if (!psd.psd)
        throw model_error("build_jordan_model: form is not PSD (min eigenvalue " +
                          std::to_string(psd.min_eigenvalue) + ")");

    const std::size_t dim = model.gram.dim();
    const Matrix<FloatComplex> gf = to_float(model.gram.g);
    const Matrix<FloatComplex> hmat = detail::conj_entries(gf);
    model.gram_eigenvalues = jacobi_eig(hmat).values;

    // Quotient basis from the equilibrated spectrum: columns D v'_k stay
    // orthonormal under the form once divided by sqrt(lambda'_k).
    const std::vector<double> dscale = detail::equilibration(hmat);
    auto eig = jacobi_eig(detail::scale_sym(hmat, dscale));
    const double lam_max = std::max(0.0, eig.values.back());
    if (lam_max <= 0.0) throw model_error("build_jordan_model: degenerate model of rank 0");

    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < dim; ++k)
        if (eig.values[k] > rank_tol * lam_max) kept.push_back(k);
    model.rank = static_cast<int>(kept.size());
    if (model.rank == 0) throw model_error("build_jordan_model: degenerate model of rank 0");

    model.qbasis = Matrix<FloatComplex>(dim, kept.size());
    model.lambda.resize(kept.size());
    for (std::size_t c = 0; c < kept.size(); ++c) {
        model.lambda[c] = eig.values[kept[c]];
        for (std::size_t i = 0; i < dim; ++i)
            model.qbasis(i, c) = dscale[i] * eig.vectors(i, kept[c]);
    }

    // Saturation: the rank at L equals the rank at L-1, so level-L sections
    // add nothing and the finite model is an exact dilation.
    if (L >= 1) {
        const std::size_t sub = dim - 2;
        Matrix<FloatComplex> hsub(sub, sub);
        for (std::size_t i = 0; i < sub; ++i)
            for (std::size_t j = 0; j < sub; ++j) hsub(i, j) = hmat(i, j);
        if constexpr (field<S>::exact) {
            Matrix<S> gsub(sub, sub);
            for (std::size_t i = 0; i < sub; ++i)
                for (std::size_t j = 0; j < sub; ++j) gsub(i, j) = model.gram.g(i, j);
            model.rank_exact = static_cast<long>(exact_rank(model.gram.g));
            model.saturated = exact_rank(gsub) == static_cast<std::size_t>(model.rank_exact);
        } else {
            model.saturated = detail::float_rank(hsub, rank_tol) == model.rank;
        }
    }

    // Section-level matrix elements of T and N.
    Matrix<FloatComplex> gm_t(dim, dim), gm_n(dim, dim);
    for (int m = 0; m <= L; ++m)
        for (int i = 0; i < 2; ++i)
            for (int n = 0; n <= L; ++n)
                for (int j = 0; j < 2; ++j) {
                    const auto u = static_cast<std::size_t>(2 * m + i);
                    const auto v = static_cast<std::size_t>(2 * n + j);
                    gm_t(u, v) = field<S>::to_cd(q.at(i, j, m + n + 1));
                    gm_n(u, v) = i == 0 ? field<S>::to_cd(q.at(1, j, m + n))
                                        : FloatComplex{0.0, 0.0};
                }
    model.tmat = detail::compress(gm_t, model.qbasis, model.lambda);
    model.nmat = detail::compress(gm_n, model.qbasis, model.lambda);
    model.tmat_hermitian_residual =
        detail::frob_norm(model.tmat - model.tmat.adjoint()) /
        std::max(1.0, detail::frob_norm(model.tmat));

    // Coordinates of V e_i = sigma_(0, e_i): <sigma_(0,i), q_k> = q_k^* H e_(0,i).
    model.vcols = Matrix<FloatComplex>(kept.size(), 2);
    for (int i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < kept.size(); ++k) {
            FloatComplex acc = 0.0;
            for (std::size_t u = 0; u < dim; ++u)
                acc += std::conj(model.qbasis(u, k)) * hmat(u, static_cast<std::size_t>(i));
            model.vcols(k, static_cast<std::size_t>(i)) = acc / std::sqrt(model.lambda[k]);
        }

    model.h0 = Matrix<FloatComplex>(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            model.h0(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                field<S>::to_cd(q.at(i, j, 0));
    return model;
}

/// s(m,n) recomputed through the dilation: coefficient vectors of
/// (T+N)^m sigma_(0,e0) = sigma_(m,e0) + m sigma_(m-1,e1) paired through the
/// FormGram inner product. Must equal generate() at (m,n).
template <class S>
S reconstruct(const FormGram<S>& gram, int m, int n) {
    if (m < 0 || n < 0 || m > gram.L || n > gram.L)
        throw degree_error("reconstruct: index outside the truncation");
    const auto idx = [](int level, int slot) { return static_cast<std::size_t>(2 * level + slot); };
    // Sparse coefficient vectors: (index, coefficient) pairs.
    std::vector<std::pair<std::size_t, S>> cm, cn;
    cm.emplace_back(idx(m, 0), field<S>::one());
    if (m > 0) cm.emplace_back(idx(m - 1, 1), field<S>::from_int(m));
    cn.emplace_back(idx(n, 0), field<S>::one());
    if (n > 0) cn.emplace_back(idx(n - 1, 1), field<S>::from_int(n));

    S acc = field<S>::zero();
    for (const auto& [u, cu] : cm)
        for (const auto& [v, cv] : cn) acc += cu * field<S>::conj(cv) * gram.g(u, v);
    return acc;
}

template <class S>
S reconstruct(const JordanModel<S>& model, int m, int n) {
    return reconstruct(model.gram, m, n);
}

/// Same value from the compressed model: <(T+N)^m v0, (T+N)^n v0>.
template <class S>
FloatComplex reconstruct_compressed(const JordanModel<S>& model, int m, int n) {
    const Matrix<FloatComplex> jn = model.tmat + model.nmat;
    const Vec<FloatComplex> v0 = model.vcols.col(0);
    const Vec<FloatComplex> a = detail::mat_pow(jn, m) * v0;
    const Vec<FloatComplex> b = detail::mat_pow(jn, n) * v0;
    return dot_c(a, b);
}

struct JordanIdentityReport {
    // Coefficient-level identities, exact index chasing.
    bool coef_nilpotent = false;
    bool coef_commute = false;
    bool coef_binomial = false;
    // Compressed-matrix residuals (Frobenius) and their scales.
    double nilpotent_residual = 0.0;
    double commute_residual = 0.0;
    double binomial_residual = 0.0;  // max over k <= kmax
    double nmat_norm = 0.0;
    double tmat_norm = 0.0;
    int kmax = 0;
    bool compressed_ok = false;
};

/// Check N^2 = 0, TN = NT and the two-term binomial expansion, both at the
/// coefficient level (exact) and on the compressed matrices.
template <class S>
JordanIdentityReport verify_jordan_identities(const JordanModel<S>& model, int kmax) {
    if (kmax < 0 || kmax > model.L - 1)
        throw degree_error("verify_jordan_identities: kmax must stay within L-1");
    JordanIdentityReport rep;
    rep.kmax = kmax;

    // Coefficient level, over exact integers: T shifts (n,i) -> (n+1,i) and
    // drops the top level; N maps (n,0) -> (n,1), (n,1) -> 0.
    {
        using RQ = RatComplex;
        const int L = model.L;
        const std::size_t dim = 2 * (static_cast<std::size_t>(L) + 1);
        Matrix<RQ> tc(dim, dim), nc(dim, dim);
        for (int n = 0; n < L; ++n)
            for (int i = 0; i < 2; ++i)
                tc(static_cast<std::size_t>(2 * (n + 1) + i), static_cast<std::size_t>(2 * n + i)) =
                    field<RQ>::one();
        for (int n = 0; n <= L; ++n)
            nc(static_cast<std::size_t>(2 * n + 1), static_cast<std::size_t>(2 * n)) =
                field<RQ>::one();

        rep.coef_nilpotent = nc * nc == Matrix<RQ>(dim, dim);

        const Matrix<RQ> tn = tc * nc, nt = nc * tc;
        rep.coef_commute = true;
        for (int n = 0; n <= L - 1; ++n)
            for (int i = 0; i < 2; ++i)
                for (std::size_t r = 0; r < dim; ++r)
                    if (tn(r, static_cast<std::size_t>(2 * n + i)) !=
                        nt(r, static_cast<std::size_t>(2 * n + i)))
                        rep.coef_commute = false;

        rep.coef_binomial = true;
        Matrix<RQ> jn = tc + nc;
        Matrix<RQ> power = Matrix<RQ>::identity(dim);
        for (int k = 1; k <= kmax; ++k) {
            power = jn * power;
            // (T+N)^k e_(0,0) should equal e_(k,0) + k e_(k-1,1).
            for (std::size_t r = 0; r < dim; ++r) {
                RQ expect = field<RQ>::zero();
                if (r == static_cast<std::size_t>(2 * k)) expect = field<RQ>::one();
                if (k > 0 && r == static_cast<std::size_t>(2 * (k - 1) + 1))
                    expect = field<RQ>::from_int(k);
                if (power(r, 0) != expect) rep.coef_binomial = false;
            }
        }
    }

    // Compressed matrices.
    const auto& t = model.tmat;
    const auto& n = model.nmat;
    rep.tmat_norm = detail::frob_norm(t);
    rep.nmat_norm = detail::frob_norm(n);
    rep.nilpotent_residual = detail::frob_norm(n * n);
    rep.commute_residual = detail::frob_norm(t * n - n * t);
    const Matrix<FloatComplex> jn = t + n;
    for (int k = 1; k <= kmax; ++k) {
        Matrix<FloatComplex> lhs = detail::mat_pow(jn, k);
        Matrix<FloatComplex> rhs = detail::mat_pow(t, k);
        const Matrix<FloatComplex> corr = detail::mat_pow(t, k - 1) * n;
        for (std::size_t i = 0; i < rhs.rows(); ++i)
            for (std::size_t j = 0; j < rhs.cols(); ++j)
                rhs(i, j) += static_cast<double>(k) * corr(i, j);
        rep.binomial_residual = std::max(rep.binomial_residual, detail::frob_norm(lhs - rhs));
    }

    const double nil_ok = rep.nilpotent_residual <= 1e-9 * std::max(1.0, rep.nmat_norm * rep.nmat_norm);
    const double comm_ok =
        rep.commute_residual <= 1e-8 * std::max(1.0, rep.tmat_norm * rep.nmat_norm);
    const double bin_scale = std::max(1.0, std::pow(rep.tmat_norm + rep.nmat_norm,
                                                    std::max(1, kmax)));
    const double bin_ok = rep.binomial_residual <= 1e-8 * bin_scale;
    rep.compressed_ok = nil_ok && comm_ok && bin_ok;
    return rep;
}

struct RecoveredMeasure {
    MatrixMeasure<FloatComplex> measure;
    std::vector<double> atoms;
    std::vector<Matrix<FloatComplex>> weights;
    double regen_residual = 0.0;  // max relative moment mismatch against the source quad
};

/// Diagonalize the compressed shift and read off atoms and weight matrices.
/// Requires a saturated hermitian model; eigenvalues within 1e-7 are merged
/// into one atom.
template <class S>
RecoveredMeasure recover_measure(const JordanModel<S>& model) {
    if (!model.hermitian_quad)
        throw unsupported_error("recover_measure: source quad is not hermitian");
    if (!model.saturated)
        throw model_error(
            "recover_measure: model is not saturated (rank still grows with the truncation); "
            "raise L until the Gram rank stabilizes");

    const std::size_t r = static_cast<std::size_t>(model.rank);
    Matrix<FloatComplex> th(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            th(i, j) = 0.5 * (model.tmat(i, j) + std::conj(model.tmat(j, i)));
    auto eig = jacobi_eig(th);

    std::vector<std::pair<std::size_t, std::size_t>> clusters;  // [begin, end)
    std::size_t begin = 0;
    for (std::size_t k = 1; k <= r; ++k) {
        if (k == r || eig.values[k] - eig.values[k - 1] > 1e-7) {
            clusters.emplace_back(begin, k);
            begin = k;
        }
    }

    const Vec<FloatComplex> v0 = model.vcols.col(0);
    const Vec<FloatComplex> v1 = model.vcols.col(1);

    std::vector<double> atoms;
    std::vector<Matrix<FloatComplex>> weights;
    double weight_scale = 0.0;
    for (const auto& [b, e] : clusters) {
        double t = 0.0;
        for (std::size_t k = b; k < e; ++k) t += eig.values[k];
        t /= static_cast<double>(e - b);

        // W_ij = <P v_i, v_j> with P the cluster projection.
        Matrix<FloatComplex> w(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                FloatComplex acc = 0.0;
                for (std::size_t k = b; k < e; ++k) {
                    const Vec<FloatComplex> uk = eig.vectors.col(k);
                    const FloatComplex ui = dot_c(i == 0 ? v0 : v1, uk);
                    const FloatComplex uj = dot_c(j == 0 ? v0 : v1, uk);
                    acc += std::conj(uj) * ui;
                }
                w(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = acc;
            }
        // Tidy roundoff so the hermitian invariant holds bit-exactly.
        w(0, 0) = {w(0, 0).real(), 0.0};
        w(1, 1) = {w(1, 1).real(), 0.0};
        w(1, 0) = std::conj(w(0, 1));
        weight_scale = std::max(weight_scale, w.max_abs());
        atoms.push_back(t);
        weights.push_back(w);
    }

    // Drop numerically empty atoms (clusters orthogonal to the cyclic vectors).
    std::vector<double> atoms_kept;
    std::vector<Matrix<FloatComplex>> weights_kept;
    std::vector<MeasureTerm<FloatComplex>> terms;
    for (std::size_t c = 0; c < atoms.size(); ++c) {
        if (weights[c].max_abs() <= 1e-12 * std::max(1.0, weight_scale)) continue;
        atoms_kept.push_back(atoms[c]);
        weights_kept.push_back(weights[c]);
        AtomicBase<FloatComplex> base;
        base.atoms.push_back({atoms[c], 1.0});
        terms.emplace_back(base, std::vector<double>{}, weights[c]);
    }
    if (terms.empty()) throw model_error("recover_measure: no atoms with nonzero weight");
    RecoveredMeasure out{MatrixMeasure<FloatComplex>(std::move(terms)), std::move(atoms_kept),
                         std::move(weights_kept), 0.0};

    // Round trip: the recovered measure must regenerate the source moments.
    const double scale = std::max(1.0, to_float(model.quad.matrix_at(0)).max_abs());
    double worst = 0.0;
    for (int k = 0; k <= model.quad.K; ++k) {
        const Matrix<FloatComplex> regen = moment(out.measure, k);
        double kscale = scale;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                kscale = std::max(kscale, field<S>::abs_approx(model.quad.at(i, j, k)));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const FloatComplex want = field<S>::to_cd(model.quad.at(i, j, k));
                const FloatComplex got =
                    regen(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                worst = std::max(worst, std::abs(want - got) / kscale);
            }
    }
    out.regen_residual = worst;
    return out;
}

}  // namespace sobmom
