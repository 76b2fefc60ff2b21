#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sobmom/linalg.hpp"
#include "test_util.hpp"

using namespace sobmom;
using sobmom::testutil::q;
using sobmom::testutil::rand_hermitian;
using sobmom::testutil::rand_rat_complex;
using RC = RatComplex;
using CD = FloatComplex;

namespace {

template <class S>
Matrix<S> from_ints(std::initializer_list<std::initializer_list<long>> rows) {
    Matrix<S> m(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (const auto& r : rows) {
        std::size_t j = 0;
        for (long v : r) m(i, j++) = field<S>::from_int(v);
        ++i;
    }
    return m;
}

// x*Hx as a double, used to validate witnesses independently.
template <class S>
double quad_form(const Matrix<S>& h, const Vec<S>& x) {
    CD acc = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j)
            acc += std::conj(field<S>::to_cd(x[i])) * field<S>::to_cd(h(i, j)) *
                   field<S>::to_cd(x[j]);
    return acc.real();
}

}  // namespace

TEST_CASE("psd_check: identity and zero") {
    auto id = Matrix<RC>::identity(3);
    auto v = psd_check(HermMatrix<RC>(id), 0.0);
    CHECK(v.psd);
    CHECK(v.min_eigenvalue == doctest::Approx(1.0).epsilon(1e-12));

    Matrix<RC> z(4, 4);
    auto vz = psd_check(HermMatrix<RC>(z));
    CHECK(vz.psd);
    CHECK(vz.min_eigenvalue == doctest::Approx(0.0));

    Matrix<RC> empty(0, 0);
    CHECK(psd_check(HermMatrix<RC>(empty)).psd);
}

TEST_CASE("psd_check: [[1,1],[1,0]] fails with golden-ratio eigenvalue") {
    // Oracle: eigenvalues are the roots of det(H - tI) = t^2 - t - 1.
    const double lam_min = (1.0 - std::sqrt(5.0)) / 2.0;

    auto h = from_ints<RC>({{1, 1}, {1, 0}});
    auto v = psd_check(HermMatrix<RC>(h));
    CHECK_FALSE(v.psd);
    CHECK(v.min_eigenvalue == doctest::Approx(lam_min).epsilon(1e-10));
    REQUIRE(v.witness.has_value());
    CHECK(quad_form(h, *v.witness) < 0.0);

    auto hf = from_ints<CD>({{1, 1}, {1, 0}});
    auto vf = psd_check(HermMatrix<CD>(hf), 1e-12);
    CHECK_FALSE(vf.psd);
    CHECK(vf.min_eigenvalue == doctest::Approx(lam_min).epsilon(1e-10));
    REQUIRE(vf.witness.has_value());
    CHECK(quad_form(hf, *vf.witness) < 0.0);
}

TEST_CASE("psd_check rejects non-hermitian input") {
    auto a = from_ints<RC>({{1, 2}, {3, 1}});
    CHECK_THROWS_AS(HermMatrix<RC>{a}, invariant_error);
}

TEST_CASE("psd_check: zero diagonal with nonzero off-diagonal is not psd") {
    Matrix<RC> h(2, 2);
    h(0, 1) = RC(mpq_class(1), mpq_class(2));
    h(1, 0) = field<RC>::conj(h(0, 1));
    auto v = psd_check(HermMatrix<RC>(h));
    CHECK_FALSE(v.psd);
    REQUIRE(v.witness.has_value());
    CHECK(quad_form(h, *v.witness) < 0.0);
}

TEST_CASE("exact and float psd_check agree on well-pivoted random hermitians") {
    std::mt19937_64 rng(20240811);
    int tested = 0;
    while (tested < 100) {
        std::uniform_int_distribution<std::size_t> dims(1, 8);
        auto h = rand_hermitian(rng, dims(rng), 6, 6);
        auto ve = psd_check(HermMatrix<RC>(h));
        if (ve.min_pivot_abs <= 1e-6) continue;  // decision too close to call in float
        auto vf = psd_check(HermMatrix<CD>(to_float(h)), 1e-9);
        CHECK(ve.psd == vf.psd);
        ++tested;
    }
}

TEST_CASE("kernel_basis: identity, X_3, all-ones row") {
    CHECK(kernel_basis(Matrix<RC>::identity(2)).empty());

    // X_3 from the decomposition machinery; kernel spanned by (-1,3,-3,1).
    auto x3 = from_ints<RC>({{1, 1, 1, 1}, {3, 2, 1, 0}, {0, 2, 2, 0}});
    auto basis = kernel_basis(x3);
    REQUIRE(basis.size() == 1);
    const auto& k = basis[0];
    // Proportionality: k = c * (-1,3,-3,1).
    const RC c = k[3];
    CHECK(k[0] == q(-1) * c);
    CHECK(k[1] == q(3) * c);
    CHECK(k[2] == q(-3) * c);
    for (const auto& e : x3 * k) CHECK(field<RC>::is_zero(e));

    auto ones = from_ints<RC>({{1, 1, 1}});
    CHECK(kernel_basis(ones).size() == 2);
}

TEST_CASE("kernel_basis float: vectors are near-null and independent") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<std::size_t> dims(1, 6);
        const std::size_t m = dims(rng), n = dims(rng);
        auto a = rand_hermitian(rng, std::max(m, n), 5, 5);
        Matrix<RC> rect(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) rect(i, j) = a(i, j);

        auto exact = kernel_basis(rect);
        auto fl = kernel_basis(to_float(rect));
        CHECK(exact.size() == fl.size());

        const auto af = to_float(rect);
        const double scale = af.max_abs() * n;
        for (const auto& v : fl) {
            double r = 0.0;
            for (const auto& e : af * v) r = std::max(r, std::abs(e));
            CHECK(r <= 1e-8 * std::max(1.0, scale));
        }
        for (const auto& v : exact)
            for (const auto& e : rect * v) CHECK(field<RC>::is_zero(e));
    }
}

TEST_CASE("min_norm_solve: spec cases") {
    auto lsq = min_norm_solve(Matrix<RC>::identity(2), Vec<RC>{q(1), q(2)});
    CHECK(lsq.x == Vec<RC>{q(1), q(2)});
    CHECK(lsq.residual2 == 0);

    auto row = from_ints<RC>({{1, 1}});
    auto on_line = min_norm_solve(row, Vec<RC>{q(2)});
    CHECK(on_line.x == Vec<RC>{q(1), q(1)});
    CHECK(on_line.residual2 == 0);

    auto col = from_ints<RC>({{1}, {1}});
    auto ls = min_norm_solve(col, Vec<RC>{q(1), q(0)});
    CHECK(ls.x == Vec<RC>{q(1, 2)});
    CHECK(ls.residual2 == mpq_class(1, 2));
    CHECK(ls.residual == doctest::Approx(std::sqrt(2.0) / 2.0));
}

TEST_CASE("min_norm_solve: probe property against random alternatives") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        std::uniform_int_distribution<std::size_t> dims(1, 5);
        const std::size_t m = dims(rng), n = dims(rng);
        Matrix<RC> a(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = rand_rat_complex(rng, 4, 4);
        Vec<RC> b(m);
        for (auto& e : b) e = rand_rat_complex(rng, 4, 4);

        auto lsq = min_norm_solve(a, b);
        for (int probe = 0; probe < 50; ++probe) {
            Vec<RC> alt(n);
            for (auto& e : alt) e = rand_rat_complex(rng, 4, 4);
            Vec<RC> res = a * alt;
            for (std::size_t i = 0; i < m; ++i) res[i] = res[i] - b[i];
            CHECK(lsq.residual2 <= norm2<RC>(res));
        }
        // Minimum norm among solutions: x + kernel directions never shrinks the norm.
        for (const auto& kv : kernel_basis(a)) {
            Vec<RC> shifted = lsq.x;
            for (std::size_t i = 0; i < n; ++i) shifted[i] += kv[i];
            CHECK(norm2<RC>(lsq.x) <= norm2<RC>(shifted));
        }
    }
}

TEST_CASE("eig_hermitian: closed-form 2x2 cases") {
    auto d = from_ints<CD>({{3, 0}, {0, 1}});
    auto ed = eig_hermitian(HermMatrix<CD>(d));
    CHECK(ed.values[0] == doctest::Approx(1.0));
    CHECK(ed.values[1] == doctest::Approx(3.0));

    auto sw = from_ints<CD>({{0, 1}, {1, 0}});
    auto es = eig_hermitian(HermMatrix<CD>(sw));
    CHECK(es.values[0] == doctest::Approx(-1.0));
    CHECK(es.values[1] == doctest::Approx(1.0));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    // Eigenvectors are (1, -1)/sqrt(2) and (1, 1)/sqrt(2) up to phase.
    auto v0 = es.vectors.col(0);
    CHECK(std::abs(v0[0]) == doctest::Approx(inv_sqrt2));
    CHECK(std::abs(v0[1]) == doctest::Approx(inv_sqrt2));
    CHECK(std::abs(v0[0] + v0[1]) == doctest::Approx(0.0).epsilon(1e-12));

    auto ei = eig_hermitian(HermMatrix<CD>(Matrix<CD>::identity(2)));
    CHECK(ei.values[0] == doctest::Approx(1.0));
    CHECK(ei.values[1] == doctest::Approx(1.0));
}

TEST_CASE("eig_hermitian: residual bounds on random hermitian matrices") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<std::size_t> dims(1, 12);
        auto h = to_float(rand_hermitian(rng, dims(rng), 8, 8));
        auto e = eig_hermitian(HermMatrix<CD>(h, 1e-9));
        const std::size_t n = h.rows();
        const double scale = std::max(1.0, h.max_abs());
        for (std::size_t k = 0; k < n; ++k) {
            auto vk = e.vectors.col(k);
            auto hv = h * vk;
            for (std::size_t i = 0; i < n; ++i)
                CHECK(std::abs(hv[i] - e.values[k] * vk[i]) <= 1e-10 * scale * n);
        }
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l) {
                const CD g = dot_c(e.vectors.col(k), e.vectors.col(l));
                CHECK(std::abs(g - (k == l ? 1.0 : 0.0)) <= 1e-10);
            }
    }
}

TEST_CASE("eig_hermitian is unsupported on the exact backend") {
    CHECK_THROWS_AS(eig_hermitian(HermMatrix<RC>(Matrix<RC>::identity(2))), unsupported_error);
}

TEST_CASE("exact rref, rank and inverse") {
    auto a = from_ints<RC>({{1, 2}, {2, 4}});
    CHECK(exact_rank(a) == 1);
    CHECK(exact_rank(Matrix<RC>::identity(3)) == 3);

    auto m = from_ints<RC>({{2, 1}, {1, 1}});
    auto inv = invert(m);
    CHECK(m * inv == Matrix<RC>::identity(2));
}
