#pragma once

#include <random>

#include "sobmom/bisequence.hpp"
#include "sobmom/measures.hpp"
#include "sobmom/polyalgebra.hpp"

namespace sobmom {

// Deterministic samplers for property tests, the acceptance suite and the
// converse explorer. All draws go through one engine type so a seed pins the
// whole stream.

inline mpq_class sample_rational(std::mt19937_64& rng, long num_max, long den_max) {
    std::uniform_int_distribution<long> num(-num_max, num_max);
    std::uniform_int_distribution<long> den(1, den_max);
    mpq_class v(num(rng), den(rng));
    v.canonicalize();
    return v;
}

inline mpq_class sample_rational_nonneg(std::mt19937_64& rng, long num_max, long den_max) {
    std::uniform_int_distribution<long> num(0, num_max);
    std::uniform_int_distribution<long> den(1, den_max);
    mpq_class v(num(rng), den(rng));
    v.canonicalize();
    return v;
}

inline RatComplex sample_complex(std::mt19937_64& rng, long num_max, long den_max) {
    const mpq_class re = sample_rational(rng, num_max, den_max);
    const mpq_class im = sample_rational(rng, num_max, den_max);
    return {re, im};
}

/// Random 2x2 hermitian positive-definite rational matrix, built as B* B
/// from a nonsingular B. Full rank keeps the section kernel slot-separated,
/// so the nilpotent descends to the RKHS quotient (rank-deficient weights are
/// exercised by the named stock measures instead).
inline Matrix<RatComplex> sample_psd_weight(std::mt19937_64& rng, long num_max = 3,
                                            long den_max = 3) {
    Matrix<RatComplex> b(2, 2);
    while (true) {
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) b(i, j) = sample_complex(rng, num_max, den_max);
        const RatComplex det = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
        if (!field<RatComplex>::is_zero(det)) break;
    }
    return b.adjoint() * b;
}

/// Random rational atomic measure: one PSD-weighted atom per term, distinct
/// atom positions with |t| <= 3 and numerators/denominators <= 10.
inline MatrixMeasure<RatComplex> sample_atomic_measure(std::mt19937_64& rng, int max_atoms = 4) {
    std::uniform_int_distribution<int> natoms(1, max_atoms);
    const int r = natoms(rng);
    std::vector<mpq_class> positions;
    while (static_cast<int>(positions.size()) < r) {
        mpq_class t = sample_rational(rng, 10, 10);
        if (abs(t) > 3) continue;
        bool fresh = true;
        for (const auto& p : positions)
            if (p == t) fresh = false;
        if (fresh) positions.push_back(t);
    }
    std::vector<MeasureTerm<RatComplex>> terms;
    for (const auto& t : positions) {
        AtomicBase<RatComplex> base;
        base.atoms.push_back({t, mpq_class(1)});
        terms.emplace_back(base, std::vector<mpq_class>{}, sample_psd_weight(rng));
    }
    return MatrixMeasure<RatComplex>(std::move(terms));
}

/// Atoms on the grid z/4 (so any two are separated by >= 1/4); used for the
/// measure-recovery round trips.
inline MatrixMeasure<RatComplex> sample_separated_atomic_measure(std::mt19937_64& rng,
                                                                 int max_atoms = 3) {
    std::uniform_int_distribution<int> natoms(1, max_atoms);
    std::uniform_int_distribution<int> grid(-8, 8);
    const int r = natoms(rng);
    std::vector<int> cells;
    while (static_cast<int>(cells.size()) < r) {
        const int z = grid(rng);
        bool fresh = true;
        for (int c : cells)
            if (c == z) fresh = false;
        if (fresh) cells.push_back(z);
    }
    std::vector<MeasureTerm<RatComplex>> terms;
    for (int z : cells) {
        AtomicBase<RatComplex> base;
        base.atoms.push_back({mpq_class(z, 4), mpq_class(1)});
        terms.emplace_back(base, std::vector<mpq_class>{}, sample_psd_weight(rng));
    }
    return MatrixMeasure<RatComplex>(std::move(terms));
}

/// Random hermitian translation-invariant quad; every bisequence generated
/// from it satisfies the Helton identity by construction.
inline MomentQuad<RatComplex> sample_hermitian_quad(std::mt19937_64& rng, int K,
                                                    long num_max = 4, long den_max = 4) {
    MomentQuad<RatComplex> q(K);
    for (int k = 0; k <= K; ++k) {
        q.at(0, 0, k) = RatComplex(sample_rational(rng, num_max, den_max));
        q.at(1, 1, k) = RatComplex(sample_rational(rng, num_max, den_max));
        q.at(1, 0, k) = sample_complex(rng, num_max, den_max);
        q.at(0, 1, k) = field<RatComplex>::conj(q.at(1, 0, k));
    }
    return q;
}

/// Random sparse bivariate polynomial of the given maximal total degree.
inline FinSupportPoly<RatComplex> sample_poly(std::mt19937_64& rng, int max_degree,
                                              int max_terms = 6, long num_max = 5,
                                              long den_max = 3) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> deg(0, max_degree);
    FinSupportPoly<RatComplex> p;
    const int count = nterms(rng);
    for (int t = 0; t < count; ++t) {
        const int m = deg(rng);
        std::uniform_int_distribution<int> rest(0, max_degree - m);
        p.add(m, rest(rng), sample_complex(rng, num_max, den_max));
    }
    return p;
}

/// Random dense bisequence; generically violates the Helton identity at
/// every level.
inline Bisequence<RatComplex> sample_random_bisequence(std::mt19937_64& rng, int L,
                                                       long num_max = 5, long den_max = 5,
                                                       bool hermitian = false) {
    Matrix<RatComplex> v(static_cast<std::size_t>(L) + 1, static_cast<std::size_t>(L) + 1);
    for (std::size_t m = 0; m <= static_cast<std::size_t>(L); ++m) {
        if (hermitian) {
            v(m, m) = RatComplex(sample_rational(rng, num_max, den_max));
            for (std::size_t n = m + 1; n <= static_cast<std::size_t>(L); ++n) {
                v(m, n) = sample_complex(rng, num_max, den_max);
                v(n, m) = field<RatComplex>::conj(v(m, n));
            }
        } else {
            for (std::size_t n = 0; n <= static_cast<std::size_t>(L); ++n)
                v(m, n) = sample_complex(rng, num_max, den_max);
        }
    }
    return Bisequence<RatComplex>(std::move(v));
}

}  // namespace sobmom
