#pragma once

#include <cstdint>
#include <optional>

#include "sobmom/decomposition.hpp"
#include "sobmom/dilation.hpp"
#include "sobmom/sampling.hpp"

namespace sobmom {

namespace detail {

// Trend verdict at desk scale: the last quartile of the sequence exceeding
// the first by a factor of 10 counts as diverging over the computed range.
inline bool diverging_by_quartile(const std::vector<double>& vals) {
    if (vals.size() < 2) return false;
    const std::size_t qn = std::max<std::size_t>(1, vals.size() / 4);
    double q1 = 0.0, q4 = 0.0;
    for (std::size_t i = 0; i < qn; ++i) {
        q1 += vals[i];
        q4 += vals[vals.size() - 1 - i];
    }
    q1 /= static_cast<double>(qn);
    q4 /= static_cast<double>(qn);
    if (q1 <= 0.0) return q4 > 1e-12;
    return q4 > 10.0 * q1;
}

// Largest generalized eigenvalue of the 2x2 pencil (A, B) restricted to the
// numerical range of B; nullopt when B has no usable direction.
inline std::optional<double> pencil_ratio(const Matrix<FloatComplex>& a,
                                          const Matrix<FloatComplex>& b) {
    auto eb = jacobi_eig(b);
    const double lam_max = eb.values.empty() ? 0.0 : std::max(0.0, eb.values.back());
    if (lam_max <= 0.0) return std::nullopt;
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < eb.values.size(); ++k)
        if (eb.values[k] > 1e-12 * lam_max) kept.push_back(k);
    if (kept.empty()) return std::nullopt;

    Matrix<FloatComplex> w(b.rows(), kept.size());
    for (std::size_t c = 0; c < kept.size(); ++c)
        for (std::size_t i = 0; i < b.rows(); ++i)
            w(i, c) = eb.vectors(i, kept[c]) / std::sqrt(eb.values[kept[c]]);
    auto em = jacobi_eig(w.adjoint() * a * w);
    return std::max(0.0, em.values.back());
}

// ||A||_2 via the largest singular value.
inline double op_norm(const Matrix<FloatComplex>& a) {
    auto svd = svd_jacobi(a);
    return svd.sigma.empty() ? 0.0 : svd.sigma.back();
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace detail

struct TGrowthPerK {
    int k = 0;
    std::vector<double> ratios;  // indexed by m (skipped cells omitted)
    double d_estimate = 0.0;     // sup over m of the pencil ratio
    bool diverging = false;
};

struct TGrowthReport {
    std::vector<TGrowthPerK> per_k;
    bool any_diverging = false;
};

/// Growth table for sigma(m+k, m+k, a, a) <= d(k) sigma(m, m, a, a): the
/// ratio is the largest generalized eigenvalue of (H(2m+2k), H(2m)) with
/// singular H(2m) restricted to its range.
template <class S>
TGrowthReport t_growth_report(const MomentQuad<S>& q, int L, double psd_tol = 1e-9) {
    if (q.K < 2 * L) throw degree_error("t_growth_report: quad covers degree " +
                                        std::to_string(q.K) + ", need " + std::to_string(2 * L));
    auto psd = form_psd_check(build_gram(q, L), psd_tol);
    if (!psd.psd)
        throw model_error("t_growth_report: form is not PSD at this truncation");

    TGrowthReport rep;
    for (int k = 1; k <= L / 2; ++k) {
        TGrowthPerK row;
        row.k = k;
        for (int m = 0; m + k <= L; ++m) {
            const auto num = to_float(q.matrix_at(2 * m + 2 * k));
            const auto den = to_float(q.matrix_at(2 * m));
            if (auto r = detail::pencil_ratio(num, den)) {
                row.ratios.push_back(*r);
                row.d_estimate = std::max(row.d_estimate, *r);
            }
        }
        row.diverging = detail::diverging_by_quartile(row.ratios);
        rep.any_diverging = rep.any_diverging || row.diverging;
        rep.per_k.push_back(std::move(row));
    }
    return rep;
}

/// Modified quad of the kernel t_alpha: h00 -> alpha h00 - h11, off-diagonals
/// and h11 scaled by alpha.
template <class S>
MomentQuad<S> t_alpha_quad(const MomentQuad<S>& q, const typename field<S>::real_t& alpha) {
    MomentQuad<S> out(q.K);
    const S a = field<S>::from_real(alpha);
    for (int k = 0; k <= q.K; ++k) {
        out.at(0, 0, k) = a * q.at(0, 0, k) - q.at(1, 1, k);
        out.at(0, 1, k) = a * q.at(0, 1, k);
        out.at(1, 0, k) = a * q.at(1, 0, k);
        out.at(1, 1, k) = a * q.at(1, 1, k);
    }
    return out;
}

struct AlphaSearchResult {
    double alpha_min = 0.0;
    bool infinite = false;  // alpha_max already fails
    int probes = 0;
};

/// Bisection for the smallest alpha with t_alpha positive semidefinite at
/// truncation L (relative width 1e-6). PSD probes run on the native backend,
/// so the exact backend decides each probe exactly at dyadic alpha.
template <class S>
AlphaSearchResult n_alpha_search(const MomentQuad<S>& q, int L, double alpha_max = 1024.0,
                                 double psd_tol = 1e-9) {
    using real_t = typename field<S>::real_t;
    if (q.K < 2 * L) throw degree_error("n_alpha_search: quad covers degree " +
                                        std::to_string(q.K) + ", need " + std::to_string(2 * L));
    if (!form_psd_check(build_gram(q, L), psd_tol).psd)
        throw model_error("n_alpha_search: base form is not PSD at this truncation");

    AlphaSearchResult res;
    auto passes = [&](const real_t& alpha) {
        ++res.probes;
        return form_psd_check(build_gram(t_alpha_quad(q, alpha), L), psd_tol).psd;
    };

    if (passes(real_t(0))) return res;  // h11 vanished entirely
    real_t hi(alpha_max);
    if (!passes(hi)) {
        res.infinite = true;
        res.alpha_min = alpha_max;
        return res;
    }
    real_t lo(0);
    while (true) {
        const double width = field<S>::real_to_double(hi - lo);
        if (width <= 1e-6 * field<S>::real_to_double(hi)) break;
        const real_t mid = (lo + hi) / real_t(2);
        (passes(mid) ? hi : lo) = mid;
    }
    res.alpha_min = field<S>::real_to_double(hi);
    return res;
}

template <class S>
struct RatioEntry {
    int n = 0;
    bool skipped = false;  // h00(2n) not strictly positive
    typename field<S>::real_t value{};
};

template <class S>
struct RatioReport {
    std::vector<RatioEntry<S>> table;  // r(n) = h11(2n)/h00(2n)
    bool diverging = false;
};

/// Even-moment ratio table backing the necessary condition for bounded N.
template <class S>
RatioReport<S> moment_ratio_test(const MomentQuad<S>& q, int L) {
    RatioReport<S> rep;
    std::vector<double> vals;
    for (int n = 0; 2 * n <= std::min(L, q.K); ++n) {
        RatioEntry<S> e;
        e.n = n;
        const S h00 = q.at(0, 0, 2 * n);
        const S h11 = q.at(1, 1, 2 * n);
        if (!field<S>::is_real(h00) || !field<S>::is_real(h11))
            throw invariant_error("moment_ratio_test: diagonal moments must be real");
        if (!(field<S>::re(h00) > 0)) {
            e.skipped = true;
        } else {
            e.value = field<S>::re(h11) / field<S>::re(h00);
            vals.push_back(field<S>::real_to_double(e.value));
        }
        rep.table.push_back(std::move(e));
    }
    rep.diverging = detail::diverging_by_quartile(vals);
    return rep;
}

struct ExploreTrial {
    std::uint64_t seed = 0;
    bool s_psd = false;
    bool form_psd = false;         // canonical-gauge decomposition
    bool form_psd_source = false;  // the sampled translation-invariant data itself
};

struct ExploreLog {
    int L = 0;
    int truncation_checked = 0;  // both checks run at L-1 (see below)
    std::uint64_t seed = 0;
    std::vector<ExploreTrial> results;
    long counts[2][2] = {{0, 0}, {0, 0}};  // [s_psd][form_psd]
    std::vector<std::pair<int, MomentQuad<RatComplex>>> candidates;
};

namespace detail {

// One explorer trial. A PSD gauge decomposition certifies s PSD at the same
// truncation; the converse fails already for measures, since the canonical
// gauge of a PSD source need not stay PSD. Both verdicts are recorded so a
// candidate with a PSD source is resolved on sight.
inline ExploreTrial explore_one(std::uint64_t tseed, int L, MomentQuad<RatComplex>& h_out,
                                bool serial) {
    std::mt19937_64 rng(tseed);
    auto h = sample_hermitian_quad(rng, 2 * L, 3, 3);
    auto s = generate(h, L);

    // Truncate s to L-1, the truncation both form checks run at.
    Matrix<RatComplex> sub(static_cast<std::size_t>(L), static_cast<std::size_t>(L));
    for (int m = 0; m < L; ++m)
        for (int n = 0; n < L; ++n)
            sub(static_cast<std::size_t>(m), static_cast<std::size_t>(n)) = s.at(m, n);
    Bisequence<RatComplex> s_sub(std::move(sub));

    ExploreTrial trial;
    trial.seed = tseed;
    trial.s_psd = bisequence_psd_check(s_sub).psd;
    auto dec = serial ? decompose_serial(s) : decompose(s);
    trial.form_psd = form_psd_check(build_gram(dec.quad, L - 1)).psd;
    trial.form_psd_source = form_psd_check(build_gram(h, L - 1)).psd;
    h_out = std::move(h);
    return trial;
}

}  // namespace detail

/// Heuristic evidence gathering for the open converse question. Each trial
/// draws random translation-invariant data h (every generated s satisfies
/// Helton exactly), then tests positive definiteness of s against the
/// canonical-gauge decomposition and against the sampled data itself, all at
/// truncation L-1. Trials with s PSD but a non-PSD gauge decomposition are
/// dumped for manual study.
inline ExploreLog explore_converse(int trials, int L, std::uint64_t seed) {
    if (L < 2) throw std::invalid_argument("explore_converse: needs L >= 2");
    if (trials < 0) throw std::invalid_argument("explore_converse: negative trial count");
    ExploreLog log;
    log.L = L;
    log.truncation_checked = L - 1;
    log.seed = seed;
    log.results.assign(static_cast<std::size_t>(trials), ExploreTrial{});
    std::vector<std::optional<MomentQuad<RatComplex>>> cand(static_cast<std::size_t>(trials));

#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t tseed = detail::splitmix64(seed + static_cast<std::uint64_t>(t));
        MomentQuad<RatComplex> h;
        const ExploreTrial trial = detail::explore_one(tseed, L, h, /*serial=*/false);
        log.results[static_cast<std::size_t>(t)] = trial;
        if (trial.s_psd && !trial.form_psd) cand[static_cast<std::size_t>(t)] = std::move(h);
    }

    for (int t = 0; t < trials; ++t) {
        const auto& trial = log.results[static_cast<std::size_t>(t)];
        ++log.counts[trial.s_psd ? 1 : 0][trial.form_psd ? 1 : 0];
        if (cand[static_cast<std::size_t>(t)])
            log.candidates.emplace_back(t, std::move(*cand[static_cast<std::size_t>(t)]));
    }
    return log;
}

/// Serial reference for the explorer; kept for tests and benchmarks.
inline ExploreLog explore_converse_serial(int trials, int L, std::uint64_t seed) {
    if (L < 2) throw std::invalid_argument("explore_converse: needs L >= 2");
    ExploreLog log;
    log.L = L;
    log.truncation_checked = L - 1;
    log.seed = seed;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t tseed = detail::splitmix64(seed + static_cast<std::uint64_t>(t));
        MomentQuad<RatComplex> h;
        const ExploreTrial trial = detail::explore_one(tseed, L, h, /*serial=*/true);
        log.results.push_back(trial);
        ++log.counts[trial.s_psd ? 1 : 0][trial.form_psd ? 1 : 0];
        if (trial.s_psd && !trial.form_psd) log.candidates.emplace_back(t, h);
    }
    return log;
}

}  // namespace sobmom
