#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "peakrisk/riskstats.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace peakrisk::risk;

TEST_CASE("tail multipliers at reference levels") {
    // one-sided Chebyshev at eps: sqrt(1/eps - 1); unimodal refinement:
    // sqrt(4/(9 eps) - 1)
    CHECK(tail_constant(0.25, TailKind::Cantelli) == doctest::Approx(std::sqrt(3.0)));
    CHECK(tail_constant(0.5, TailKind::Cantelli) == doctest::Approx(1.0));
    CHECK(tail_constant(1.0 / 9.0, TailKind::VysochanskijPetunin) ==
          doctest::Approx(std::sqrt(3.0)));
    CHECK(tail_constant(0.1, TailKind::VysochanskijPetunin) ==
          doctest::Approx(std::sqrt(4.0 / 0.9 - 1.0)));
}

TEST_CASE("unimodal multiplier is tighter where valid") {
    for (double eps : {0.01, 0.05, 0.1, 1.0 / 6.0})
        CHECK(tail_constant(eps, TailKind::VysochanskijPetunin) <
              tail_constant(eps, TailKind::Cantelli));
}

TEST_CASE("invalid risk levels throw") {
    CHECK_THROWS_AS(tail_constant(0.0, TailKind::Cantelli), std::invalid_argument);
    CHECK_THROWS_AS(tail_constant(1.0, TailKind::Cantelli), std::invalid_argument);
    // unimodal bound only valid for eps <= 1/6
    CHECK_THROWS_AS(tail_constant(0.2, TailKind::VysochanskijPetunin), std::invalid_argument);
}

TEST_CASE("tail bound is mean plus multiplier times deviation") {
    CHECK(tail_bound(2.0, 1.0, 0.5, TailKind::Cantelli) == doctest::Approx(3.0));
}

TEST_CASE("empirical VaR on a known sample") {
    // samples 1..100; VaR at eps = 0.05 is the 5th largest = 96
    EmpiricalDistribution d;
    for (int i = 1; i <= 100; ++i) d.samples.push_back(static_cast<double>(i));
    CHECK(empirical_var(d, 0.05) == doctest::Approx(96.0));
    CHECK(empirical_var(d, 0.01) == doctest::Approx(100.0));
    // ES at eps = 0.05 averages the top 5: (96+...+100)/5 = 98
    CHECK(empirical_es(d, 0.05) == doctest::Approx(98.0));
}

TEST_CASE("ES dominates VaR and fractional tail weight is handled") {
    EmpiricalDistribution d;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) d.samples.push_back(g(rng));
    for (double eps : {0.013, 0.05, 0.1, 0.5}) {
        const double var = empirical_var(d, eps);
        const double es = empirical_es(d, eps);
        CHECK(es >= var - 1e-12);
    }
    // standard normal: VaR_{0.05} approx 1.645, ES_{0.05} approx 2.06
    CHECK(empirical_var(d, 0.05) == doctest::Approx(1.645).epsilon(0.1));
    CHECK(empirical_es(d, 0.05) == doctest::Approx(2.06).epsilon(0.1));
}

TEST_CASE("degenerate sample sets throw") {
    EmpiricalDistribution d;
    CHECK_THROWS_AS(empirical_var(d, 0.1), std::invalid_argument);
    d.samples = {1.0, 2.0};
    CHECK_THROWS_AS(empirical_var(d, 0.0), std::invalid_argument);
}
