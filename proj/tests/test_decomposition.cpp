#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sobmom/decomposition.hpp"
#include "sobmom/sampling.hpp"
#include "sobmom/stock.hpp"
#include "test_util.hpp"

using namespace sobmom;
using sobmom::testutil::q;
using RC = RatComplex;

namespace {

Bisequence<RC> geometric_bisequence(long x, long y, int L) {
    Matrix<RC> v(static_cast<std::size_t>(L) + 1, static_cast<std::size_t>(L) + 1);
    for (int m = 0; m <= L; ++m)
        for (int n = 0; n <= L; ++n) {
            mpz_class val = 1;
            for (int i = 0; i < m; ++i) val *= x;
            for (int i = 0; i < n; ++i) val *= y;
            v(static_cast<std::size_t>(m), static_cast<std::size_t>(n)) = RC(mpq_class(val));
        }
    return Bisequence<RC>(std::move(v));
}

bool all_determined_levels_zero(const Decomposition<RC>& dec) {
    for (const auto& lv : dec.levels)
        if (!lv.underdetermined && !lv.exact_zero) return false;
    return true;
}

}  // namespace

TEST_CASE("decompose: constant bisequence") {
    // Values extracted from levels with < 3 equations carry the edge flag and
    // are not pinned, so the natural-h assertions stop at degree 2L-2.
    auto s = generate(moment_quad(stock_dirac1_diag10<RC>(), 12), 6);
    auto dec = decompose(s);
    CHECK(all_determined_levels_zero(dec));
    CHECK(dec.levels[11].edge);
    CHECK(dec.levels[12].edge);
    CHECK_FALSE(dec.levels[10].edge);
    for (int k = 0; k <= 10; ++k) CHECK(dec.quad.at(0, 0, k) == q(1));
    for (int k = 0; k <= 9; ++k) {
        CHECK(field<RC>::is_zero(dec.quad.at(1, 0, k)));
        CHECK(field<RC>::is_zero(dec.quad.at(0, 1, k)));
    }
    for (int k = 0; k <= 8; ++k) CHECK(field<RC>::is_zero(dec.quad.at(1, 1, k)));
}

TEST_CASE("decompose: s(m,n) = 1 + mn recovers diagonal quads") {
    auto s = generate(moment_quad(stock_dirac1_identity<RC>(), 12), 6);
    auto dec = decompose(s);
    CHECK(all_determined_levels_zero(dec));
    // Gauge-independent level-2 elimination: h11(0) = s(1,1) - s(2,0) = 1.
    CHECK(dec.quad.at(1, 1, 0) == q(1));
    for (int k = 0; k <= 8; ++k) CHECK(dec.quad.at(1, 1, k) == q(1));
    for (int k = 0; k <= 10; ++k) CHECK(dec.quad.at(0, 0, k) == q(1));
    for (int k = 0; k <= 9; ++k) CHECK(field<RC>::is_zero(dec.quad.at(1, 0, k)));
}

TEST_CASE("decompose flags the geometric bisequence as inconsistent") {
    auto s = geometric_bisequence(2, 3, 6);
    auto dec = decompose(s);
    bool some_positive = false;
    for (int d = 3; d <= 6; ++d) {
        const auto& lv = dec.levels[static_cast<std::size_t>(d)];
        if (!lv.underdetermined && !lv.exact_zero && lv.residual > 0) some_positive = true;
    }
    CHECK(some_positive);
    CHECK_FALSE(dec.consistent());

    // An inconsistent input cannot round-trip.
    auto back = reassemble(dec, 6);
    bool differs = false;
    for (int m = 0; m <= 6 && !differs; ++m)
        for (int n = 0; n <= 6; ++n)
            if (m + n >= 3 && back.at(m, n) != s.at(m, n)) {
                differs = true;
                break;
            }
    CHECK(differs);
}

TEST_CASE("round trip on random atomic measures is exact") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 20; ++trial) {
        auto mu = sample_atomic_measure(rng, 4);
        auto s = generate(moment_quad(mu, 16), 8);
        auto dec = decompose(s);
        CHECK(all_determined_levels_zero(dec));
        auto back = reassemble(dec, 8);
        CHECK(back.values == s.values);
        CHECK(dec.quad.hermitian());
    }
}

TEST_CASE("decompose parallel output equals the serial reference") {
    std::mt19937_64 rng(2025);
    for (int trial = 0; trial < 5; ++trial) {
        auto s = sample_random_bisequence(rng, 9);
        auto par = decompose(s);
        auto ser = decompose_serial(s);
        CHECK(par.quad.h == ser.quad.h);
        REQUIRE(par.levels.size() == ser.levels.size());
        for (std::size_t d = 0; d < par.levels.size(); ++d) {
            CHECK(par.levels[d].exact_zero == ser.levels[d].exact_zero);
            CHECK(par.levels[d].residual == ser.levels[d].residual);
        }
    }
}

TEST_CASE("gauge freedom at levels 1 and 2 never reaches the reassembled s") {
    std::mt19937_64 rng(888);
    auto mu = sample_atomic_measure(rng, 3);
    auto s = generate(moment_quad(mu, 12), 6);
    auto dec = decompose(s);
    auto base = reassemble(dec, 6);
    CHECK(base.values == s.values);

    // Shift along the level-1 kernel (-1, 1, 1) and the level-2 kernel (-2, 1, 1, 0).
    const RC t1(mpq_class(3, 7), mpq_class(1, 5));
    dec.quad.at(0, 0, 1) = dec.quad.at(0, 0, 1) - t1;
    dec.quad.at(1, 0, 0) += t1;
    dec.quad.at(0, 1, 0) += t1;
    const RC t2(mpq_class(-2, 3));
    dec.quad.at(0, 0, 2) = dec.quad.at(0, 0, 2) - q(2) * t2;
    dec.quad.at(1, 0, 1) += t2;
    dec.quad.at(0, 1, 1) += t2;

    auto shifted = reassemble(dec, 6);
    CHECK(shifted.values == s.values);
}

TEST_CASE("helton and decomposition residuals agree level by level") {
    std::mt19937_64 rng(99991);
    int measure_like = 0;
    for (int trial = 0; trial < 50; ++trial) {
        Bisequence<RC> s;
        if (trial % 2 == 0) {
            auto mu = sample_atomic_measure(rng, 3);
            s = generate(moment_quad(mu, 12), 6);
            ++measure_like;
        } else {
            s = sample_random_bisequence(rng, 6);
        }
        auto rep = consistency_equiv_check(s);
        CHECK(rep.agree);
        if (trial % 2 == 0) {
            CHECK(rep.helton_pass);
            CHECK(rep.decomposition_pass);
        }
    }
    CHECK(measure_like == 25);
}

TEST_CASE("equivalence spot checks") {
    auto ones = generate(moment_quad(stock_dirac1_diag10<RC>(), 12), 6);
    auto rep = consistency_equiv_check(ones);
    CHECK(rep.helton_pass);
    CHECK(rep.decomposition_pass);
    CHECK(rep.agree);

    auto geo = consistency_equiv_check(geometric_bisequence(2, 3, 6));
    CHECK_FALSE(geo.helton_pass);
    CHECK_FALSE(geo.decomposition_pass);
    CHECK(geo.agree);
}

TEST_CASE("hermitian input yields hermitian recovered quads") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 10; ++trial) {
        auto s = generate(sample_hermitian_quad(rng, 12), 6);
        CHECK(s.hermitian_case);
        auto dec = decompose(s);
        CHECK(all_determined_levels_zero(dec));
        CHECK(dec.quad.hermitian());
        CHECK(reassemble(dec, 6).values == s.values);
    }
}
