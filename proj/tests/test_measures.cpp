#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sobmom/sampling.hpp"
#include "sobmom/stock.hpp"
#include "test_util.hpp"

using namespace sobmom;
using sobmom::testutil::q;
using RC = RatComplex;
using CD = FloatComplex;

TEST_CASE("moment: dirac, gaussian, polynomial density") {
    auto dirac = stock_dirac1_diag10<RC>();
    for (long k : {0L, 1L, 5L, 12L}) {
        auto h = moment(dirac, k);
        CHECK(h(0, 0) == q(1));
        CHECK(field<RC>::is_zero(h(0, 1)));
        CHECK(field<RC>::is_zero(h(1, 1)));
    }

    // Standard normal: E[t^4] = 3!! = 3.
    auto gauss = stock_gaussian_identity<RC>();
    auto h4 = moment(gauss, 4);
    CHECK(h4(0, 0) == q(3));
    CHECK(h4(1, 1) == q(3));
    CHECK(field<RC>::is_zero(h4(0, 1)));
    CHECK(field<RC>::is_zero(moment(gauss, 3)(0, 0)));

    // Density t^2 against diag(0,1): integral of t^4 dgamma = 3 at k = 2.
    auto pair = stock_gaussian_pair<RC>(1);
    auto h2 = moment(pair, 2);
    CHECK(h2(1, 1) == q(3));
    CHECK(h2(0, 0) == q(1));  // E[t^2] of the 00 part
}

TEST_CASE("gaussian raw moments follow the double factorial") {
    auto gauss = stock_gaussian_identity<RC>();
    mpq_class expect = 1;  // (2n-1)!! by accumulation
    for (long n = 0; n <= 10; ++n) {
        if (n > 0) expect *= 2 * n - 1;
        CHECK(field<RC>::re(moment(gauss, 2 * n)(0, 0)) == expect);
    }
}

TEST_CASE("validate: psd terms pass, indefinite matrix and odd density fail") {
    CHECK(validate(stock_dirac1_diag10<RC>()).ok);
    CHECK(validate(stock_gaussian_pair<RC>(1)).ok);  // even density, nonneg coefficient

    // [[1,2],[2,1]] has eigenvalues 3 and -1.
    auto bad = dirac_measure<RC>(mpq_class(1), weight_matrix<RC>(1, 2, 2, 1));
    auto rep = validate(bad);
    CHECK_FALSE(rep.ok);
    CHECK(validate(bad, /*force=*/true).ok);

    GaussianBase<RC> base{mpq_class(1)};
    std::vector<MeasureTerm<RC>> terms;
    terms.emplace_back(base, std::vector<mpq_class>{mpq_class(0), mpq_class(1)},
                       weight_matrix<RC>(1, 0, 0, 1));
    auto odd = MatrixMeasure<RC>(std::move(terms));
    CHECK_FALSE(validate(odd).ok);

    CHECK_THROWS_AS(dirac_measure<RC>(mpq_class(1), weight_matrix<RC>(1, 2, 3, 1)),
                    invariant_error);
}

TEST_CASE("moment_quad: tabulation matches the examples") {
    auto quad = moment_quad(stock_dirac1_diag10<RC>(), 3);
    for (int k = 0; k <= 3; ++k) {
        CHECK(quad.at(0, 0, k) == q(1));
        CHECK(field<RC>::is_zero(quad.at(1, 1, k)));
    }

    auto two = moment_quad(stock_two_atoms_pm1<RC>(), 2);
    CHECK(two.at(0, 0, 0) == q(1));
    CHECK(two.at(0, 0, 1) == q(1));
    CHECK(two.at(0, 0, 2) == q(1));
    CHECK(two.at(1, 1, 0) == q(1));
    CHECK(two.at(1, 1, 1) == q(-1));
    CHECK(two.at(1, 1, 2) == q(1));
    CHECK(field<RC>::is_zero(two.at(0, 1, 1)));

    auto gq = moment_quad(stock_gaussian_identity<RC>(), 4);
    const long expect[] = {1, 0, 1, 0, 3};
    for (int k = 0; k <= 4; ++k) {
        CHECK(gq.at(0, 0, k) == q(expect[k]));
        CHECK(gq.at(1, 1, k) == q(expect[k]));
        CHECK(field<RC>::is_zero(gq.at(0, 1, k)));
    }
    CHECK(gq.hermitian());
}

TEST_CASE("moments are hermitian and additive in terms") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 15; ++trial) {
        auto mu = sample_atomic_measure(rng, 4);
        auto quad = moment_quad(mu, 8);
        CHECK(quad.hermitian());
        for (int n = 0; n <= 4; ++n)
            CHECK(field<RC>::re(quad.at(0, 0, 2 * n)) >= 0);

        // Splitting a term into two half-mass copies changes nothing.
        std::vector<MeasureTerm<RC>> split;
        for (const auto& term : mu.terms) {
            auto halved = std::get<AtomicBase<RC>>(term.base);
            for (auto& a : halved.atoms) a.mass /= 2;
            split.emplace_back(halved, term.density_poly, term.matrix);
            split.emplace_back(halved, term.density_poly, term.matrix);
        }
        auto mu2 = MatrixMeasure<RC>(std::move(split));
        for (long k = 0; k <= 8; ++k) {
            auto a = moment(mu, k), b = moment(mu2, k);
            CHECK(a == b);
        }
    }
}

TEST_CASE("float backend agrees with exact moments") {
    auto exact = moment_quad(stock_gaussian_pair<RC>(2), 10);
    auto fl = moment_quad(stock_gaussian_pair<CD>(2), 10);
    for (int k = 0; k <= 10; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(field<CD>::abs_approx(fl.at(i, j, k) -
                                            field<RC>::to_cd(exact.at(i, j, k))) <=
                      1e-9 * std::max(1.0, field<RC>::abs_approx(exact.at(i, j, k))));
}
