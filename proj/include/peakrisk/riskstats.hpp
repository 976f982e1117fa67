#pragma once

// Closed-form and empirical risk statistics: VaR, Expected Shortfall, and
// the Cantelli / Vysochanskij-Petunin concentration constants.

#include <vector>

namespace peakrisk::risk {

enum class TailKind { Cantelli, VysochanskijPetunin };

// r_C = sqrt(1/eps - 1), r_VP = sqrt(4/(9 eps) - 1).
// VP is only valid for eps <= 1/6 (and unimodal distributions, which the
// caller asserts); requesting it outside that range throws.
double tail_constant(double eps, TailKind kind);

// mean + tail_constant(eps, kind) * sigma
double tail_bound(double mean, double sigma, double eps, TailKind kind);

struct EmpiricalDistribution {
    std::vector<double> samples;  // nonempty, finite
};

// The ceil(N*eps)-th largest sample (sup definition, no interpolation).
double empirical_var(const EmpiricalDistribution& d, double eps);

// Sorted-tail average with fractional weight on the boundary order
// statistic when N*eps is not an integer (atom splitting).
double empirical_es(const EmpiricalDistribution& d, double eps);

}  // namespace peakrisk::risk
