#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fraccurv/mittag_leffler.hpp"

using namespace fraccurv;

namespace {

// Independent term-by-term oracle for the truncated series: every gamma is
// evaluated directly and the partial sums are accumulated in long double,
// with no shared code path beyond std::tgamma itself.
long double ml_naive(const MLParams& mp, double z) {
    long double sum = 0.0L;
    for (int k = 0; k <= mp.trunc; ++k) {
        const long double poch_num =
            std::tgammal(static_cast<long double>(mp.rho) + mp.q * k) / std::tgammal(mp.rho);
        const long double poch_den =
            std::tgammal(static_cast<long double>(mp.delta) + mp.p * k) / std::tgammal(mp.delta);
        sum += (poch_num / poch_den) * std::pow(static_cast<long double>(z), k)
               / std::tgammal(static_cast<long double>(mp.gamma) * k + mp.beta);
    }
    return sum;
}

}  // namespace

TEST_CASE("gamma_fn reference values") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(gamma_fn(0.5) == doctest::Approx(1.7724538509055160273).epsilon(1e-13));
    CHECK(gamma_fn(1.5) == doctest::Approx(0.88622692545275801365).epsilon(1e-13));
    CHECK(gamma_fn(10.3) == doctest::Approx(716430.68906237524455).epsilon(1e-13));
}

TEST_CASE("gamma_fn domain errors") {
    CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
    CHECK_THROWS_AS(gamma_fn(-1.0), DomainError);
    CHECK_THROWS_AS(gamma_fn(std::nan("")), DomainError);
    CHECK_THROWS_AS(gamma_fn(1e6), OverflowError);
}

TEST_CASE("pochhammer closed forms") {
    CHECK(pochhammer(3.7, 1.2, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pochhammer(2.0, 1.0, 1) == doctest::Approx(2.0).epsilon(1e-14));
    // Gamma(1.5) = 0.5 Gamma(0.5) by the recurrence.
    CHECK(pochhammer(0.5, 0.5, 2) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK_THROWS_AS(pochhammer(-1.0, 1.0, 1), DomainError);
    CHECK_THROWS_AS(pochhammer(1.0, 1.0, -1), DomainError);
}

TEST_CASE("pochhammer recurrence ratio property") {
    std::mt19937 rng(20260826);
    std::uniform_real_distribution<double> par(0.25, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double rho = par(rng), q = par(rng);
        const int k = static_cast<int>(rng() % 20);
        const double ratio = pochhammer(rho, q, k + 1) / pochhammer(rho, q, k);
        const double expected = gamma_fn(rho + q * (k + 1)) / gamma_fn(rho + q * k);
        CHECK(ratio == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("pochhammer large arguments stay finite") {
    // Componentwise gammas overflow long before the ratio does.
    const double v = pochhammer(200.0, 2.0, 10);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
}

TEST_CASE("ml_truncated degenerate cases") {
    MLParams mp;
    mp.beta = 2.7;
    mp.trunc = 0;
    CHECK(ml_truncated(mp, 123.0) == doctest::Approx(1.0 / gamma_fn(2.7)).epsilon(1e-14));

    MLParams ones;
    ones.trunc = 20;
    CHECK(ml_truncated(ones, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    // All parameters 1: the series degenerates to sum 1/k!.
    CHECK(ml_truncated(ones, 1.0) == doctest::Approx(2.71828182845904523536).epsilon(1e-14));
}

TEST_CASE("ml_truncated matches the naive oracle") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> par(0.25, 4.0);
    std::uniform_real_distribution<double> zs(-10.0, 10.0);
    for (int trial = 0; trial < 300; ++trial) {
        MLParams mp;
        mp.gamma = par(rng);
        mp.beta = par(rng);
        mp.rho = par(rng);
        mp.delta = par(rng);
        mp.p = par(rng);
        mp.q = par(rng);
        mp.trunc = static_cast<int>(rng() % 25);
        const double z = zs(rng);
        const double got = ml_truncated(mp, z);
        const double expect = static_cast<double>(ml_naive(mp, z));
        CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("ml_truncated monotone in truncation for positive z") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> par(0.25, 4.0);
    std::uniform_real_distribution<double> zs(0.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        MLParams mp;
        mp.gamma = par(rng);
        mp.beta = par(rng);
        mp.rho = par(rng);
        mp.delta = par(rng);
        mp.p = par(rng);
        mp.q = par(rng);
        mp.trunc = static_cast<int>(rng() % 15);
        const double z = zs(rng);
        const double lo = ml_truncated(mp, z);
        ++mp.trunc;
        CHECK(ml_truncated(mp, z) >= lo);
    }
}

TEST_CASE("h_function") {
    MLParams mp;
    mp.beta = 2.0;
    mp.trunc = 0;
    CHECK(h_function(mp, 55.5) == doctest::Approx(1.0).epsilon(1e-14));

    MLParams ones;
    ones.trunc = 20;
    CHECK(h_function(ones, 1.0) == doctest::Approx(2.71828182845904523536).epsilon(1e-14));

    std::mt19937 rng(13);
    std::uniform_real_distribution<double> par(0.25, 4.0);
    for (int trial = 0; trial < 100; ++trial) {
        MLParams mp2;
        mp2.gamma = par(rng);
        mp2.beta = par(rng);
        mp2.rho = par(rng);
        mp2.delta = par(rng);
        mp2.p = par(rng);
        mp2.q = par(rng);
        mp2.trunc = static_cast<int>(rng() % 25);
        CHECK(h_function(mp2, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("parameter validation") {
    MLParams mp;
    mp.beta = 0.0;
    CHECK_THROWS_AS(ml_truncated(mp, 1.0), InvalidParameter);
    mp.beta = 1.0;
    mp.trunc = -1;
    CHECK_THROWS_AS(ml_truncated(mp, 1.0), InvalidParameter);
}
