#pragma once

#include <string>

#include "sobmom/bisequence.hpp"

namespace sobmom {

struct LevelInfo {
    int degree = 0;
    int eq_count = 0;
    double residual = 0.0;        // ||Ax - b|| for the level system
    bool exact_zero = false;      // residual known to vanish exactly
    bool underdetermined = false; // < 4 equations: inconsistency undetectable
    bool edge = false;            // < 3 equations: unknowns not pinned by the truncation
};

/// Translation-invariant decomposition of a bisequence: the recovered moment
/// quad (h00 to degree 2L, h10/h01 to 2L-1, h11 to 2L-2) plus per-level
/// residual certificates.
template <class S>
struct Decomposition {
    int L = -1;
    MomentQuad<S> quad;             // K = 2L; structurally absent slots are zero
    std::vector<LevelInfo> levels;  // indexed by total degree d = 0..2L
    std::string gauge = "min-offdiagonal-per-level";

    bool consistent() const {
        for (const auto& lv : levels)
            if (!lv.underdetermined && !lv.exact_zero && lv.residual > 0.0) return false;
        return true;
    }
};

namespace detail {

// Solve the single level d: unknowns (h00(d), h10(d-1), h01(d-1), h11(d-2)),
// one equation per anti-diagonal cell inside the square truncation.
template <class S>
void decompose_level(const Bisequence<S>& s, int d, Decomposition<S>& out) {
    const int L = s.L;
    const S half = field<S>::one() / field<S>::from_int(2);
    LevelInfo info;
    info.degree = d;
    const int m_lo = std::max(0, d - L), m_hi = std::min(d, L);
    info.eq_count = m_hi - m_lo + 1;

    auto& q = out.quad;
    if (d == 0) {
        q.at(0, 0, 0) = s.at(0, 0);
        info.exact_zero = true;
    } else if (d == 1) {
        // One-parameter gauge: minimize |h10(0)|^2 + |h01(0)|^2. The minimizer
        // of sum |a_i - t|^2 is the mean, so this stays exact.
        const S t = (s.at(1, 0) + s.at(0, 1)) * half;
        q.at(0, 0, 1) = t;
        q.at(1, 0, 0) = s.at(1, 0) - t;
        q.at(0, 1, 0) = s.at(0, 1) - t;
        info.exact_zero = true;
    } else if (d == 2) {
        const S a = (s.at(2, 0) + s.at(0, 2)) * half;
        q.at(0, 0, 2) = a;
        q.at(1, 0, 1) = (s.at(2, 0) - a) * half;
        q.at(0, 1, 1) = (s.at(0, 2) - a) * half;
        q.at(1, 1, 0) = s.at(1, 1) - a - q.at(1, 0, 1) - q.at(0, 1, 1);
        info.exact_zero = true;
    } else {
        Matrix<S> a(static_cast<std::size_t>(info.eq_count), 4);
        Vec<S> b(static_cast<std::size_t>(info.eq_count));
        for (int m = m_lo; m <= m_hi; ++m) {
            const std::size_t r = static_cast<std::size_t>(m - m_lo);
            a(r, 0) = field<S>::one();
            a(r, 1) = field<S>::from_int(m);
            a(r, 2) = field<S>::from_int(d - m);
            a(r, 3) = field<S>::from_int(static_cast<long>(m) * (d - m));
            b[r] = s.at(m, d - m);
        }
        auto lsq = min_norm_solve(a, b);
        // The level system always has the kernel direction (-d, 1, 1, 0);
        // shift along it to minimize |h10|^2 + |h01|^2, the same gauge as at
        // levels 1-2. Reassembly is insensitive to this shift.
        const S t = (field<S>::zero() - (lsq.x[1] + lsq.x[2])) * half;
        q.at(0, 0, d) = lsq.x[0] - field<S>::from_int(d) * t;
        q.at(1, 0, d - 1) = lsq.x[1] + t;
        q.at(0, 1, d - 1) = lsq.x[2] + t;
        q.at(1, 1, d - 2) = lsq.x[3];
        info.residual = lsq.residual;
        info.exact_zero = field<S>::exact ? lsq.residual2 == 0 : lsq.residual == 0.0;
        // The level matrix has rank 3 (columns span {1, m, m^2}); at least four
        // sample points are needed before an inconsistency can show up, and
        // three before the unknowns are pinned modulo the gauge direction.
        info.underdetermined = info.eq_count < 4;
        info.edge = info.eq_count < 3;
    }
    out.levels[static_cast<std::size_t>(d)] = info;
}

}  // namespace detail

/// Serial reference for the level solver; kept for tests and benchmarks.
template <class S>
Decomposition<S> decompose_serial(const Bisequence<S>& s) {
    Decomposition<S> out;
    out.L = s.L;
    out.quad = MomentQuad<S>(2 * s.L);
    out.levels.assign(static_cast<std::size_t>(2 * s.L) + 1, LevelInfo{});
    for (int d = 0; d <= 2 * s.L; ++d) detail::decompose_level(s, d, out);
    return out;
}

/// Levels decouple by total degree, so they are solved in parallel.
template <class S>
Decomposition<S> decompose(const Bisequence<S>& s) {
    Decomposition<S> out;
    out.L = s.L;
    out.quad = MomentQuad<S>(2 * s.L);
    out.levels.assign(static_cast<std::size_t>(2 * s.L) + 1, LevelInfo{});
#pragma omp parallel for schedule(dynamic)
    for (int d = 0; d <= 2 * s.L; ++d) detail::decompose_level(s, d, out);
    return out;
}

/// Reassemble a bisequence from the recovered quad.
template <class S>
Bisequence<S> reassemble(const Decomposition<S>& dec, int L) {
    return generate(dec.quad, L);
}

struct EquivReport {
    bool helton_pass = false;
    bool decomposition_pass = false;
    bool agree = false;
};

/// Level-by-level equivalence of the Helton identity and decomposition
/// consistency, restricted to fully determined levels 3 <= d <= L.
template <class S>
EquivReport consistency_equiv_check(const Bisequence<S>& s) {
    if (s.L < 3) throw degree_error("consistency_equiv_check: needs truncation degree >= 3");
    EquivReport rep;

    const auto grid = helton_residual_grid(s);
    rep.helton_pass = true;
    for (std::size_t m = 0; m < grid.rows(); ++m)
        for (std::size_t n = 0; n < grid.cols(); ++n) {
            const int level = static_cast<int>(m + n) + 3;
            if (level > s.L) continue;
            if constexpr (field<S>::exact) {
                if (!field<S>::is_zero(grid(m, n))) rep.helton_pass = false;
            } else {
                if (field<S>::abs_approx(grid(m, n)) >
                    1e-10 * std::max(1.0, s.values.max_abs()))
                    rep.helton_pass = false;
            }
        }

    const auto dec = decompose(s);
    rep.decomposition_pass = true;
    for (int d = 3; d <= s.L; ++d) {
        const auto& lv = dec.levels[static_cast<std::size_t>(d)];
        if (lv.underdetermined) continue;
        if constexpr (field<S>::exact) {
            if (!lv.exact_zero) rep.decomposition_pass = false;
        } else {
            if (lv.residual > 1e-10 * std::max(1.0, s.values.max_abs()))
                rep.decomposition_pass = false;
        }
    }
    rep.agree = rep.helton_pass == rep.decomposition_pass;
    return rep;
}

}  // namespace sobmom
