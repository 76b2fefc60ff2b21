#pragma once

#include "sobmom/measures.hpp"

namespace sobmom {

// Small named measures that recur throughout the test and diagnostic
// surfaces: point masses, the standard Gaussian, and the Gaussian pair
// d(mu11) = t^{2k} d(mu00) driving the N-unboundedness example.

template <class S>
Matrix<S> weight_matrix(long a00, long a01, long a10, long a11) {
    Matrix<S> m(2, 2);
    m(0, 0) = field<S>::from_int(a00);
    m(0, 1) = field<S>::from_int(a01);
    m(1, 0) = field<S>::from_int(a10);
    m(1, 1) = field<S>::from_int(a11);
    return m;
}

template <class S>
MatrixMeasure<S> dirac_measure(typename field<S>::real_t t, Matrix<S> weight) {
    AtomicBase<S> base;
    base.atoms.push_back({std::move(t), typename field<S>::real_t(1)});
    std::vector<MeasureTerm<S>> terms;
    terms.emplace_back(std::move(base), std::vector<typename field<S>::real_t>{},
                       std::move(weight));
    return MatrixMeasure<S>(std::move(terms));
}

template <class S>
MatrixMeasure<S> stock_dirac1_diag10() {
    return dirac_measure<S>(typename field<S>::real_t(1), weight_matrix<S>(1, 0, 0, 0));
}

template <class S>
MatrixMeasure<S> stock_dirac1_identity() {
    return dirac_measure<S>(typename field<S>::real_t(1), weight_matrix<S>(1, 0, 0, 1));
}

template <class S>
MatrixMeasure<S> stock_dirac0_identity() {
    return dirac_measure<S>(typename field<S>::real_t(0), weight_matrix<S>(1, 0, 0, 1));
}

template <class S>
MatrixMeasure<S> stock_dirac2_diag10() {
    return dirac_measure<S>(typename field<S>::real_t(2), weight_matrix<S>(1, 0, 0, 0));
}

/// Atoms {(+1, diag(1,0)), (-1, diag(0,1))}.
template <class S>
MatrixMeasure<S> stock_two_atoms_pm1() {
    using real_t = typename field<S>::real_t;
    AtomicBase<S> plus, minus;
    plus.atoms.push_back({real_t(1), real_t(1)});
    minus.atoms.push_back({real_t(-1), real_t(1)});
    std::vector<MeasureTerm<S>> terms;
    terms.emplace_back(plus, std::vector<real_t>{}, weight_matrix<S>(1, 0, 0, 0));
    terms.emplace_back(minus, std::vector<real_t>{}, weight_matrix<S>(0, 0, 0, 1));
    return MatrixMeasure<S>(std::move(terms));
}

template <class S>
MatrixMeasure<S> stock_gaussian_identity() {
    using real_t = typename field<S>::real_t;
    GaussianBase<S> base{real_t(1)};
    std::vector<MeasureTerm<S>> terms;
    terms.emplace_back(base, std::vector<real_t>{}, weight_matrix<S>(1, 0, 0, 1));
    return MatrixMeasure<S>(std::move(terms));
}

/// mu00 = standard Gaussian, mu11 = t^{2k} * mu00, zero off-diagonals.
template <class S>
MatrixMeasure<S> stock_gaussian_pair(int k) {
    using real_t = typename field<S>::real_t;
    GaussianBase<S> base{real_t(1)};
    std::vector<real_t> density(static_cast<std::size_t>(2 * k) + 1, real_t(0));
    density.back() = real_t(1);
    std::vector<MeasureTerm<S>> terms;
    terms.emplace_back(base, std::vector<real_t>{}, weight_matrix<S>(1, 0, 0, 0));
    terms.emplace_back(base, std::move(density), weight_matrix<S>(0, 0, 0, 1));
    return MatrixMeasure<S>(std::move(terms));
}

}  // namespace sobmom
