#pragma once

// Monte Carlo ground-truth estimator: Euler-Maruyama path simulation with
// boundary stopping for all three process kinds, and time-sup empirical
// VaR / ES / tail statistics for cross-validating the certified bounds.

#include <cstdint>
#include <utility>
#include <vector>

#include "peakrisk/model.hpp"
#include "peakrisk/riskstats.hpp"

namespace peakrisk::mc {

using model::InitialCondition;
using model::Polynomial;
using model::ProcessModel;
using model::SemialgebraicSet;

struct SimConfig {
    int n_paths = 50000;       // even when antithetic
    double dt = 1e-3;          // must divide the horizon (within 1e-9)
    bool antithetic = true;
    std::uint64_t seed = 0;
    int stat_stride = 10;      // statistic grid = every stat_stride-th step
    double dwell = 0.0;        // switched models: mode dwell, default 10*dt
};

struct PathEnsemble {
    // times[k] is the k-th statistic-grid time; values[k][i] the value of p
    // on path i at that time, frozen after the path's first exit from X.
    std::vector<double> times;
    std::vector<std::vector<double>> values;
    std::vector<double> stop_times;

    // Full state snapshots on the same grid (state_dim * n_paths each),
    // kept for the distance statistic; empty unless requested.
    std::vector<std::vector<double>> states;
    int state_dim = 0;
};

enum class SupStat { VaR, ES, Mean, CantelliEmp, VPEmp };

// Simulate n_paths trajectories stopped at the boundary of X, recording
// p along the statistic grid. Per-path RNG streams are derived from
// (seed, path index), so the ensemble is independent of execution order.
// keep_states retains state snapshots for distance_statistic.
PathEnsemble simulate(const ProcessModel& m, const SemialgebraicSet& X,
                      const InitialCondition& init, const Polynomial& p,
                      const SimConfig& cfg, bool keep_states = false);

// The per-time empirical statistic maximized over the grid; returns the
// maximum and its achieving time. CantelliEmp / VPEmp apply the
// mean + r(eps) sigma tail bound to per-time sample moments.
std::pair<double, double> sup_statistic(const PathEnsemble& ens, double eps,
                                        SupStat stat);

// Closest-approach statistic: per path and time, the squared distance
// min_{u in X_u} c(x, u) (computed over a fine sample of X_u), then the
// per-time lower-eps statistic minimized over the grid. The ensemble must
// have been simulated with keep_states = true; c has arity 2 * state_dim.
double distance_statistic(const PathEnsemble& ens, const SemialgebraicSet& X_u,
                          const Polynomial& c, double eps, SupStat stat);

// Batch-means standard error of the sup statistic (10 path batches).
double sup_statistic_stderr(const PathEnsemble& ens, double eps, SupStat stat);

}  // namespace peakrisk::mc
