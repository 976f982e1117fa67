#pragma once

// Stochastic process models (Ito SDE, discrete-time map with random
// parameters, switched families), their generators acting on polynomials,
// and basic semialgebraic support sets.
//
// Convention used throughout: polynomials over time-state have time as
// variable 0 and the state variables after it.

#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "peakrisk/poly.hpp"

namespace peakrisk::model {

using poly::MultiIndex;
using poly::Polynomial;

// { x : h_k(x) >= 0 for all k }. An optional bounding box rides along for
// range enclosures and sampling; it is advisory, the constraints define
// the set.
struct SemialgebraicSet {
    int arity = 0;
    std::vector<Polynomial> constraints;
    bool has_ball_constraint = false;
    std::vector<double> box_lo, box_hi;  // may be empty

    bool contains(const std::vector<double>& x, double tol = 1e-9) const;
};

// Box as one quadratic constraint (x_i - lo)(hi - x_i) >= 0 per coordinate,
// plus the ball constraint R - |x|^2 with R = 1.05 * max |corner|^2.
SemialgebraicSet make_box_set(const std::vector<double>& lo, const std::vector<double>& hi);

// Lift X over (t, x): { t(T - t) >= 0 } plus the lifted constraints of X;
// a ball constraint over (t, x) is added if X does not carry one.
SemialgebraicSet make_timebox_set(const SemialgebraicSet& X, double T);

// Interval enclosure of p over the box via interval arithmetic on monomials.
// Possibly loose, but always contains the true range.
std::pair<double, double> polynomial_range_on_box(const Polynomial& p,
                                                  const std::vector<double>& lo,
                                                  const std::vector<double>& hi);

// Scalar parameter distribution with a moment oracle (for the generator)
// and a sampler (for the Monte Carlo oracle).
struct ParameterDistribution {
    enum class Kind { PointMass, Uniform, Normal };
    Kind kind = Kind::PointMass;
    // PointMass: value = p0.    Uniform: on [p0, p1].    Normal: N(p0, p1^2).
    double p0 = 0.0, p1 = 1.0;
    int max_order = 1 << 22;  // moment oracle cap; exceeding it throws

    double moment(int k) const;  // E[lambda^k]
    double sample(std::mt19937_64& rng) const;

    static ParameterDistribution point_mass(double v);
    static ParameterDistribution uniform(double a, double b);
    static ParameterDistribution normal(double mean, double sigma);
};

struct ItoSDE {
    // drift[i], diffusion_cols[j][i] are polynomials in (t, x), arity n+1
    std::vector<Polynomial> drift;
    std::vector<std::vector<Polynomial>> diffusion_cols;
};

struct DiscreteTime {
    // map[i] is a polynomial in (t, x, lambda), arity 1 + n + #params
    std::vector<Polynomial> map;
    double dt = 0.0;
    std::vector<ParameterDistribution> params;
};

struct Switched {
    std::vector<std::variant<ItoSDE, DiscreteTime>> subsystems;
};

struct ProcessModel {
    int state_dim = 0;
    double horizon = 0.0;  // T > 0
    std::variant<ItoSDE, DiscreteTime, Switched> dynamics;

    bool is_switched() const { return std::holds_alternative<Switched>(dynamics); }
    size_t num_subsystems() const;
    void validate() const;
};

struct InitialCondition {
    enum class Kind {
        DiracPoint,     // delta at `point`
        GivenMoments,   // moments <x^a, mu0> supplied directly
        FreeOverSet,    // mu0 a decision measure over free_set, mass 1
        PointWithFree,  // delta at `point` on leading coords, free over
                        // free_set on the remaining coords (distance lift)
    };
    Kind kind = Kind::DiracPoint;
    std::vector<double> point;
    std::map<MultiIndex, double, poly::GrlexLess> given_moments;
    SemialgebraicSet free_set;

    static InitialCondition dirac(std::vector<double> x0);
    static InitialCondition free_over(SemialgebraicSet X0);
};

// Generator applied to a test polynomial v(t, x), arity 1 + n.
//   Ito:       dv/dt + f . grad_x v + (1/2) sum_j g_j^T (hess_x v) g_j
//   Discrete:  ( E_lambda[ v(t + dt, f(t, x, lambda)) ] - v(t, x) ) / dt
Polynomial generator_apply(const ItoSDE& sde, int state_dim, const Polynomial& v);
Polynomial generator_apply(const DiscreteTime& dm, int state_dim, const Polynomial& v);
Polynomial generator_apply(const ProcessModel& m, const Polynomial& v);  // non-switched

// Smallest D with deg L(t^b x^a) <= 2D for all |a| + b <= probe_degree,
// found by symbolic application to every basis monomial.
int generator_degree_bound(const ProcessModel& m, int probe_degree);

}  // namespace peakrisk::model
