#include "peakrisk/mcoracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace peakrisk::mc {
namespace {

using model::DiscreteTime;
using model::ItoSDE;
using model::Switched;

// Flat term list for fast inner-loop evaluation; Polynomial::evaluate walks
// an ordered map, which is too slow for 10^8+ calls.
struct CompiledPoly {
    struct Term {
        double coeff;
        std::vector<int> exps;
    };
    std::vector<Term> terms;
    int arity = 0;

    static CompiledPoly from(const Polynomial& p) {
        CompiledPoly out;
        out.arity = p.arity();
        for (const auto& [mi, c] : p.terms()) out.terms.push_back({c, mi});
        return out;
    }

    double eval(const double* x) const {
        double acc = 0.0;
        for (const auto& t : terms) {
            double m = t.coeff;
            for (int v = 0; v < arity; ++v)
                for (int e = 0; e < t.exps[v]; ++e) m *= x[v];
            acc += m;
        }
        return acc;
    }
};

struct CompiledSde {
    std::vector<CompiledPoly> drift;
    std::vector<std::vector<CompiledPoly>> diff_cols;
};

CompiledSde compile(const ItoSDE& sde) {
    CompiledSde c;
    for (const auto& f : sde.drift) c.drift.push_back(CompiledPoly::from(f));
    for (const auto& col : sde.diffusion_cols) {
        c.diff_cols.emplace_back();
        for (const auto& g : col) c.diff_cols.back().push_back(CompiledPoly::from(g));
    }
    return c;
}

// SplitMix64: decorrelates per-path streams from (seed, index).
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct MembershipTest {
    const SemialgebraicSet* X;
    bool use_box;
    std::vector<CompiledPoly> constraints;

    explicit MembershipTest(const SemialgebraicSet& set) : X(&set) {
        use_box = !set.box_lo.empty() && !set.box_hi.empty();
        if (!use_box)
            for (const auto& h : set.constraints)
                constraints.push_back(CompiledPoly::from(h));
    }

    bool contains(const double* x, int n) const {
        if (use_box) {
            for (int i = 0; i < n; ++i)
                if (x[i] < X->box_lo[i] - 1e-9 || x[i] > X->box_hi[i] + 1e-9)
                    return false;
            return true;
        }
        for (const auto& h : constraints)
            if (h.eval(x) < -1e-9) return false;
        return true;
    }
};

std::vector<double> sample_initial(const InitialCondition& init,
                                   std::mt19937_64& rng) {
    switch (init.kind) {
        case InitialCondition::Kind::DiracPoint:
            return init.point;
        case InitialCondition::Kind::FreeOverSet: {
            const auto& S = init.free_set;
            if (S.box_lo.empty())
                throw std::invalid_argument(
                    "sampling a free initial set requires a bounding box");
            std::vector<double> x(S.arity);
            for (int attempt = 0; attempt < 100000; ++attempt) {
                for (int i = 0; i < S.arity; ++i) {
                    std::uniform_real_distribution<double> u(S.box_lo[i],
                                                             S.box_hi[i]);
                    x[i] = u(rng);
                }
                if (S.contains(x)) return x;
            }
            throw std::runtime_error("initial-set rejection sampling failed");
        }
        default:
            throw std::invalid_argument(
                "initial condition is not samplable for Monte Carlo");
    }
}

}  // namespace

PathEnsemble simulate(const ProcessModel& m, const SemialgebraicSet& X,
                      const InitialCondition& init, const Polynomial& p,
                      const SimConfig& cfg, bool keep_states) {
    m.validate();
    const int n = m.state_dim;
    const double T = m.horizon;
    const bool discrete = std::holds_alternative<DiscreteTime>(m.dynamics);

    const double dt = discrete ? std::get<DiscreteTime>(m.dynamics).dt : cfg.dt;
    const long steps = std::lround(T / dt);
    if (std::abs(steps * dt - T) > 1e-9 * std::max(1.0, T))
        throw std::invalid_argument("dt must divide the horizon");
    if (cfg.antithetic && cfg.n_paths % 2 != 0)
        throw std::invalid_argument("antithetic pairing needs an even path count");

    // Every subsystem compiled up front; non-switched models are a
    // one-element family that never resamples.
    std::vector<std::variant<CompiledSde, const DiscreteTime*>> modes;
    if (m.is_switched()) {
        for (const auto& sub : std::get<Switched>(m.dynamics).subsystems) {
            if (const auto* sde = std::get_if<ItoSDE>(&sub))
                modes.emplace_back(compile(*sde));
            else
                modes.emplace_back(&std::get<DiscreteTime>(sub));
        }
    } else if (const auto* sde = std::get_if<ItoSDE>(&m.dynamics)) {
        modes.emplace_back(compile(*sde));
    } else {
        modes.emplace_back(&std::get<DiscreteTime>(m.dynamics));
    }
    const int n_modes = static_cast<int>(modes.size());
    const double dwell = cfg.dwell > 0 ? cfg.dwell : 10 * dt;
    const long dwell_steps = std::max(1L, std::lround(dwell / dt));

    const CompiledPoly cp = CompiledPoly::from(p);
    const MembershipTest member(X);

    PathEnsemble ens;
    ens.state_dim = n;
    const int stride = std::max(1, cfg.stat_stride);
    for (long k = 0; k <= steps; k += stride) ens.times.push_back(k * dt);
    if ((steps % stride) != 0) ens.times.push_back(T);
    const int n_grid = static_cast<int>(ens.times.size());
    ens.values.assign(n_grid, std::vector<double>(cfg.n_paths));
    if (keep_states)
        ens.states.assign(n_grid, std::vector<double>(cfg.n_paths * n));
    ens.stop_times.assign(cfg.n_paths, T);

    std::vector<double> x(n), xn(n), tx(n + 1), dw;
    std::vector<double> lam_args;
    std::normal_distribution<double> gauss(0.0, 1.0);

    const int pair = cfg.antithetic ? 2 : 1;
    for (int i = 0; i < cfg.n_paths; i += pair) {
        // one stream drives the whole pair; the partner path reuses the
        // Wiener draws negated and the mode / parameter draws as-is
        std::mt19937_64 rng(mix(cfg.seed ^ mix(static_cast<std::uint64_t>(i))));
        std::vector<std::vector<double>> xs(pair, sample_initial(init, rng));
        std::vector<bool> stopped(pair, false);
        int mode = 0;
        int grid_pos = 0;

        // p is a state polynomial (arity n) in every table problem, but a
        // time-state polynomial (arity n + 1) is accepted too
        auto record = [&](int g) {
            for (int q = 0; q < pair; ++q) {
                tx[0] = ens.times[g];
                for (int v = 0; v < n; ++v) tx[1 + v] = xs[q][v];
                ens.values[g][i + q] =
                    cp.eval(cp.arity == n + 1 ? tx.data() : tx.data() + 1);
                if (keep_states)
                    std::copy(xs[q].begin(), xs[q].end(),
                              ens.states[g].begin() + (i + q) * n);
            }
        };
        record(grid_pos++);

        for (long k = 0; k < steps; ++k) {
            const double t = k * dt;
            if (n_modes > 1 && k % dwell_steps == 0)
                mode = static_cast<int>(rng() % n_modes);

            if (const auto* sde = std::get_if<CompiledSde>(&modes[mode])) {
                const int ncols = static_cast<int>(sde->diff_cols.size());
                dw.resize(ncols);
                for (int j = 0; j < ncols; ++j)
                    dw[j] = gauss(rng) * std::sqrt(dt);
                for (int q = 0; q < pair; ++q) {
                    if (stopped[q]) continue;
                    tx[0] = t;
                    for (int v = 0; v < n; ++v) tx[1 + v] = xs[q][v];
                    const double sgn = (q == 0) ? 1.0 : -1.0;
                    for (int v = 0; v < n; ++v) {
                        double dx = sde->drift[v].eval(tx.data()) * dt;
                        for (int j = 0; j < ncols; ++j)
                            dx += sde->diff_cols[j][v].eval(tx.data()) * sgn * dw[j];
                        xn[v] = xs[q][v] + dx;
                    }
                    if (!member.contains(xn.data(), n)) {
                        stopped[q] = true;
                        ens.stop_times[i + q] = t + dt;
                    } else {
                        xs[q] = xn;
                    }
                }
            } else {
                const DiscreteTime* dm = std::get<const DiscreteTime*>(modes[mode]);
                const int np = static_cast<int>(dm->params.size());
                lam_args.assign(1 + n + np, 0.0);
                for (int q = 0; q < pair; ++q) {
                    if (stopped[q]) continue;
                    lam_args[0] = t;
                    for (int v = 0; v < n; ++v) lam_args[1 + v] = xs[q][v];
                    for (int j = 0; j < np; ++j)
                        lam_args[1 + n + j] = dm->params[j].sample(rng);
                    for (int v = 0; v < n; ++v)
                        xn[v] = dm->map[v].evaluate(lam_args);
                    if (!member.contains(xn.data(), n)) {
                        stopped[q] = true;
                        ens.stop_times[i + q] = t + dt;
                    } else {
                        xs[q] = xn;
                    }
                }
            }

            if (grid_pos < n_grid &&
                std::abs((k + 1) * dt - ens.times[grid_pos]) < dt / 2)
                record(grid_pos++);
        }
        while (grid_pos < n_grid) record(grid_pos++);
    }
    return ens;
}

namespace {

double grid_statistic(const std::vector<double>& samples, double eps,
                      SupStat stat) {
    switch (stat) {
        case SupStat::VaR:
            return risk::empirical_var({samples}, eps);
        case SupStat::ES:
            return risk::empirical_es({samples}, eps);
        case SupStat::Mean:
            return std::accumulate(samples.begin(), samples.end(), 0.0) /
                   static_cast<double>(samples.size());
        case SupStat::CantelliEmp:
        case SupStat::VPEmp: {
            const double N = static_cast<double>(samples.size());
            const double mean =
                std::accumulate(samples.begin(), samples.end(), 0.0) / N;
            double var = 0.0;
            for (double s : samples) var += (s - mean) * (s - mean);
            var /= N;
            const auto kind = stat == SupStat::CantelliEmp
                                  ? risk::TailKind::Cantelli
                                  : risk::TailKind::VysochanskijPetunin;
            return risk::tail_bound(mean, std::sqrt(var), eps, kind);
        }
    }
    throw std::logic_error("unknown statistic");
}

}  // namespace

std::pair<double, double> sup_statistic(const PathEnsemble& ens, double eps,
                                        SupStat stat) {
    double best = -std::numeric_limits<double>::infinity();
    double at = 0.0;
    for (size_t k = 0; k < ens.times.size(); ++k) {
        const double v = grid_statistic(ens.values[k], eps, stat);
        if (v > best) {
            best = v;
            at = ens.times[k];
        }
    }
    return {best, at};
}

double distance_statistic(const PathEnsemble& ens, const SemialgebraicSet& X_u,
                          const Polynomial& c, double eps, SupStat stat) {
    if (ens.states.empty())
        throw std::invalid_argument(
            "distance statistic needs an ensemble simulated with states kept");
    const int n = ens.state_dim;
    if (X_u.box_lo.empty())
        throw std::invalid_argument("unsafe set needs a bounding box to sample");

    // fine deterministic grid over the unsafe set's box, filtered by its
    // constraints; c is then minimized over these points
    std::vector<std::vector<double>> u_pts;
    const int per_axis = X_u.arity <= 2 ? 120 : 24;
    std::vector<int> idx(X_u.arity, 0);
    std::vector<double> u(X_u.arity);
    for (;;) {
        for (int v = 0; v < X_u.arity; ++v) {
            const double f =
                per_axis == 1 ? 0.5
                              : static_cast<double>(idx[v]) / (per_axis - 1);
            u[v] = X_u.box_lo[v] + f * (X_u.box_hi[v] - X_u.box_lo[v]);
        }
        if (X_u.contains(u)) u_pts.push_back(u);
        int v = 0;
        while (v < X_u.arity && ++idx[v] == per_axis) idx[v++] = 0;
        if (v == X_u.arity) break;
    }
    if (u_pts.empty()) throw std::invalid_argument("unsafe set sample is empty");

    const CompiledPoly cc = CompiledPoly::from(c);
    std::vector<double> args(n + X_u.arity);
    const int n_paths = static_cast<int>(ens.values.front().size());
    std::vector<double> dists(n_paths);

    double best = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < ens.times.size(); ++k) {
        for (int i = 0; i < n_paths; ++i) {
            std::copy(ens.states[k].begin() + i * n,
                      ens.states[k].begin() + (i + 1) * n, args.begin());
            double dmin = std::numeric_limits<double>::infinity();
            for (const auto& up : u_pts) {
                std::copy(up.begin(), up.end(), args.begin() + n);
                dmin = std::min(dmin, cc.eval(args.data()));
            }
            dists[i] = dmin;
        }
        // lower tail: the eps-quantile / shortfall of the distance from below
        double v;
        if (stat == SupStat::VaR || stat == SupStat::ES) {
            for (double& d : dists) d = -d;
            v = -grid_statistic(dists, eps, stat);
        } else {
            v = grid_statistic(dists, eps, stat);
        }
        best = std::min(best, v);
    }
    return best;
}

double sup_statistic_stderr(const PathEnsemble& ens, double eps, SupStat stat) {
    const int n_paths = static_cast<int>(ens.values.front().size());
    const int batches = 10;
    const int per = n_paths / batches;
    if (per < 10) throw std::invalid_argument("too few paths for batch means");
    std::vector<double> vals;
    std::vector<double> sub(per);
    for (int b = 0; b < batches; ++b) {
        PathEnsemble view;
        view.times = ens.times;
        view.values.reserve(ens.values.size());
        for (const auto& row : ens.values) {
            std::copy(row.begin() + b * per, row.begin() + (b + 1) * per,
                      sub.begin());
            view.values.push_back(sub);
        }
        vals.push_back(sup_statistic(view, eps, stat).first);
    }
    const double mean =
        std::accumulate(vals.begin(), vals.end(), 0.0) / batches;
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= (batches - 1);
    return std::sqrt(var / batches);
}

}  // namespace peakrisk::mc
