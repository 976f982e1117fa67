#pragma once

// Assembly of risk-bound relaxations as standard-form conic programs:
// mean-peak, tail-bound (Cantelli / Vysochanskij-Petunin) SOCPs, Expected
// Shortfall LPs, switched-system variants, and unsafe-set distance variants,
// all over truncated occupation/stopping moment sequences. Includes bound
// solving, dual-certificate extraction, and grid-based certificate checks.

#include <map>
#include <string>
#include <vector>

#include "peakrisk/conic.hpp"
#include "peakrisk/model.hpp"
#include "peakrisk/moments.hpp"
#include "peakrisk/riskstats.hpp"

namespace peakrisk::assemble {

using model::InitialCondition;
using model::ProcessModel;
using model::SemialgebraicSet;
using poly::MultiIndex;
using poly::Polynomial;

enum class BoundKind { Mean, Cantelli, VP, ES, DistanceES, DistanceTail };

const char* kind_name(BoundKind k);

struct BoundSpec {
    ProcessModel process;
    SemialgebraicSet X;       // state support set, arity n
    InitialCondition init;
    Polynomial p = Polynomial::zero(1);  // state function, arity n
    BoundKind kind = BoundKind::Mean;
    double eps = 0.5;         // risk level; ignored for Mean
    int order = 2;            // relaxation order d
    bool unimodal = false;    // user-asserted; required for VP
    // distance kinds only:
    SemialgebraicSet X_u;                     // unsafe set, arity n_u
    Polynomial metric = Polynomial::zero(1);  // c(x, x_u), arity n + n_u
    bool soc_as_psd = false;  // route SOC blocks through the PSD embedding

    void validate() const;
};

// one named block of moment decision variables inside the conic program
struct MeasureLayout {
    std::string name;
    int var_offset = 0;
    int arity = 0;
    int max_degree = 0;
    int size = 0;
};

struct AssembledProgram {
    conic::ConicProgram program;
    std::vector<MeasureLayout> measures;
    double objective_sign = 1.0;  // reported value = sign * primal objective
    // row bookkeeping for dual extraction
    int dynamics_row_start = -1;
    std::vector<MultiIndex> dynamics_monomials;  // (t, x) monomial per row
    int shortfall_row_start = -1;                // rows for L(p^k) - eps n_k - nhat_k
    int shortfall_row_count = 0;
    int norm_row = -1;   // n_0 = 1 row
    int soc_row_start = -1;
    double tail_r = 0.0;
    // ES support interval for the scalar measures
    double p_lo = 0.0, p_hi = 0.0;

    const MeasureLayout& layout(const std::string& name) const;
};

AssembledProgram build(const BoundSpec& spec);

struct BoundResult {
    double value = 0.0;
    conic::SolveStatus status = conic::SolveStatus::IterLimit;
    double duality_gap = 0.0;
    std::map<std::string, Eigen::VectorXd> moments;
    conic::ConicSolution solution;
    int iterations = 0;
};

BoundResult solve_bound(const BoundSpec& spec, const conic::SolverSettings& settings = {});
BoundResult solve_assembled(const BoundSpec& spec, const AssembledProgram& prog,
                            const conic::SolverSettings& settings = {});

// Dual certificate: value function v(t, x); for tail kinds the quadratic
// adjustment v + u[0] p^2 + u[1] p >= p; for ES the scalar u[0] and the
// univariate polynomial w with v >= w(p), u + eps w >= s, w >= 0.
struct Certificate {
    Polynomial v = Polynomial::zero(1);  // arity 1 + n
    std::vector<double> u;
    Polynomial w = Polynomial::zero(1);  // univariate, ES kinds only
    bool has_w = false;
    double dual_value = 0.0;  // recomputed dual objective
};

Certificate extract_certificate(const BoundSpec& spec, const AssembledProgram& prog,
                                const conic::ConicSolution& sol);

struct ViolationReport {
    // worst signed violations (positive = constraint broken), grid-sampled
    double generator = 0.0;    // max of Lv over the time-state grid
    double dominance = 0.0;    // max of p-side minus v-side
    double scalar_lower = 0.0; // ES: max of s - (u + eps w(s))
    double w_negative = 0.0;   // ES: max of -w(s)
    double scale = 1.0;        // magnitude reference for tolerances
    double worst() const;
};

ViolationReport verify_certificate(const Certificate& cert, const BoundSpec& spec,
                                   int grid_density = 25);

}  // namespace peakrisk::assemble
