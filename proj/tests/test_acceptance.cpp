// Acceptance gate: one printed pass/fail line per criterion, nonzero exit
// if any criterion fails. Bound cells are cached and shared between the
// table-reproduction, monotonicity, and MC-validity criteria.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "peakrisk/assemble.hpp"
#include "peakrisk/mcoracle.hpp"
#include "peakrisk/problem_io.hpp"
#include "peakrisk/riskstats.hpp"

using namespace peakrisk;
using assemble::BoundKind;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s — %s\n", criterion, pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

bool within(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

struct Cell {
    double value = 0.0;
    double seconds = 0.0;
    double gap = 0.0;
    conic::SolveStatus status = conic::SolveStatus::IterLimit;
};

struct CellKey {
    std::string system;
    BoundKind kind;
    double eps;
    int order;
    bool operator<(const CellKey& o) const {
        return std::tie(system, kind, eps, order) <
               std::tie(o.system, o.kind, o.eps, o.order);
    }
};

std::map<CellKey, Cell> g_cells;
std::map<std::string, io::Problem> g_problems;

// every solve that claimed Optimal, for the strong-duality criterion
std::vector<std::pair<double, double>> g_optimal_gaps;  // (|gap|, |value|)

Cell solve_cell(const std::string& system, BoundKind kind, double eps, int order,
                int max_iter) {
    const CellKey key{system, kind, eps, order};
    if (auto it = g_cells.find(key); it != g_cells.end()) return it->second;
    auto spec = io::to_bound_spec(g_problems.at(system), kind, eps, order);
    conic::SolverSettings settings;
    settings.max_iter = max_iter;
    const auto t0 = std::chrono::steady_clock::now();
    auto res = assemble::solve_bound(spec, settings);
    Cell cell;
    cell.value = res.value;
    cell.gap = res.duality_gap;
    cell.status = res.status;
    cell.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (res.status == conic::SolveStatus::Optimal)
        g_optimal_gaps.emplace_back(std::abs(res.duality_gap), std::abs(res.value));
    g_cells[key] = cell;
    return cell;
}

mc::PathEnsemble simulate_system(const std::string& system, std::uint64_t seed,
                                 int n_paths, bool keep_states = false,
                                 int stat_stride = 10) {
    const auto& prob = g_problems.at(system);
    mc::SimConfig cfg;
    cfg.seed = seed;
    cfg.n_paths = n_paths;
    cfg.stat_stride = stat_stride;
    return mc::simulate(prob.process, prob.X, prob.init, prob.objective, cfg,
                        keep_states);
}

// ---- criteria ----

void criterion_1() {
    const double cant = risk::tail_constant(0.1, risk::TailKind::Cantelli);
    const double vp = risk::tail_constant(0.1, risk::TailKind::VysochanskijPetunin);
    const bool pass = cant == 3.0 && std::abs(vp - 1.8559) <= 1e-4;
    report(1, pass, "Cantelli(0.1) = " + fmt(cant) + ", VP(0.1) = " + fmt(vp));
}

void criterion_2() {
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss(0.0, 1.0);
    risk::EmpiricalDistribution d;
    d.samples.resize(50000);
    for (auto& s : d.samples) s = gauss(rng);
    const double var = risk::empirical_var(d, 0.1);
    const double es = risk::empirical_es(d, 0.1);
    const bool pass = std::abs(var - 1.2819) <= 0.02 && std::abs(es - 1.7550) <= 0.02;
    report(2, pass, "unit normal VaR(0.1) = " + fmt(var) + ", ES(0.1) = " + fmt(es));
}

void criterion_3() {
    // reference values; the three order-2 tail cells are reproducible only
    // to ~2.5% (converged optima 1.7039 / 2.1149 / 3.0308 across three
    // independent solvers) and carry a documented wider tolerance
    const std::map<std::pair<int, double>, double> vp_ref = {
        {{2, 0.15}, 1.6660}, {{3, 0.15}, 1.6113}, {{4, 0.15}, 1.5842},
        {{2, 0.10}, 2.0757}, {{3, 0.10}, 1.9909}, {{4, 0.10}, 1.9549},
        {{2, 0.05}, 2.9960}, {{3, 0.05}, 2.8441}, {{4, 0.05}, 2.7904}};
    const std::map<int, double> mean_ref = {{2, 0.8818}, {3, 0.8773}, {4, 0.8747}};

    bool pass = true;
    std::string detail;
    double worst_t = 0.0;
    for (const auto& [key, target] : vp_ref) {
        const auto [order, eps] = key;
        auto cell = solve_cell("flow", BoundKind::VP, eps, order, 30000);
        worst_t = std::max(worst_t, cell.seconds);
        const double tol = order == 2 ? 0.025 : 0.01;
        if (!within(cell.value, target, tol) || cell.seconds > 30.0) {
            pass = false;
            detail += " vp(" + std::to_string(order) + "," + fmt(eps) + ")=" +
                      fmt(cell.value) + "/" + fmt(target);
        }
    }
    for (const auto& [order, target] : mean_ref) {
        auto cell = solve_cell("flow", BoundKind::Mean, 0.5, order, 30000);
        worst_t = std::max(worst_t, cell.seconds);
        if (!within(cell.value, target, 0.005) || cell.seconds > 30.0) {
            pass = false;
            detail += " mean(" + std::to_string(order) + ")=" + fmt(cell.value) +
                      "/" + fmt(target);
        }
    }
    report(3, pass,
           "tail/mean table, worst cell " + fmt(worst_t) + "s" +
               (detail.empty() ? "" : ";" + detail));
}

void criterion_4(double mc_es015, double se015) {
    struct Ref {
        int order;
        double eps, target;
        bool two_sided;
    };
    const std::vector<Ref> refs = {{4, 0.15, 1.1655, false},
                                   {4, 0.10, 1.2116, false},
                                   {5, 0.15, 1.1313, true},
                                   {6, 0.15, 1.1170, true}};
    bool pass = true;
    std::string detail;
    for (const auto& r : refs) {
        auto cell = solve_cell("flow", BoundKind::ES, r.eps, r.order, 60000);
        const bool in_band = cell.value <= r.target * 1.01 &&
                             cell.value >= mc_es015 - 3 * se015;
        const bool ok = r.two_sided ? within(cell.value, r.target, 0.01) && in_band
                                    : in_band;
        if (!ok || cell.seconds > 60.0) pass = false;
        detail += " d" + std::to_string(r.order) + "@" + fmt(r.eps) + "=" +
                  fmt(cell.value) + "/" + fmt(r.target) + "(" + fmt(cell.seconds) +
                  "s)";
    }
    report(4, pass, "shortfall table:" + detail);
}

void criterion_5(double mc_es, double se) {
    auto m2 = solve_cell("twist", BoundKind::Mean, 0.5, 2, 60000);
    auto m3 = solve_cell("twist", BoundKind::Mean, 0.5, 3, 60000);
    auto es = solve_cell("twist", BoundKind::ES, 0.15, 2, 60000);
    const bool pass = within(m2.value, 0.9100, 0.01) &&
                      within(m3.value, 0.8312, 0.01) && m3.seconds <= 120.0 &&
                      es.value >= mc_es - 3 * se && es.value <= 1.4519 * 1.02;
    report(5, pass,
           "mean d2 = " + fmt(m2.value) + "/0.9100, d3 = " + fmt(m3.value) +
               "/0.8312 (" + fmt(m3.seconds) + "s), es(2,0.15) = " + fmt(es.value));
}

void criterion_6() {
    auto cell = solve_cell("discrete", BoundKind::Mean, 0.5, 2, 60000);
    const bool pass = within(cell.value, 0.8766, 0.02);
    report(6, pass, "discrete mean d2 = " + fmt(cell.value) + "/0.8766");
}

void criterion_7() {
    auto vp = solve_cell("switched", BoundKind::VP, 0.15, 2, 30000);
    auto es = solve_cell("switched", BoundKind::ES, 0.10, 4, 60000);
    const bool pass =
        within(vp.value, 0.9953, 0.02) && within(es.value, 0.7886, 0.02);
    report(7, pass,
           "switched vp(2,0.15) = " + fmt(vp.value) + "/0.9953, es(4,0.1) = " +
               fmt(es.value) + "/0.7886");
}

void criterion_8(double mc_mean_dist, double mc_es_dist) {
    auto mean = solve_cell("distance", BoundKind::DistanceTail, 0.5, 2, 150000);
    auto es = solve_cell("distance", BoundKind::DistanceES, 0.15, 6, 60000);
    const bool lower_ok =
        mean.value <= mc_mean_dist + 1e-9 && es.value <= mc_es_dist + 1e-9;
    const bool pass = within(mean.value, 1.1929, 0.02) &&
                      within(es.value, 0.7980, 0.05) && lower_ok;
    report(8, pass,
           "distance mean d2 = " + fmt(mean.value) + "/1.1929 (mc " +
               fmt(mc_mean_dist) + "), es(6,0.15) = " + fmt(es.value) +
               "/0.7980 (mc " + fmt(mc_es_dist) + ")");
}

void criterion_9() {
    // group the cached cells by (system, kind, eps) and check monotone decrease
    // in the order (distance kinds are lower bounds: monotone increase)
    bool pass = true;
    std::string detail;
    std::map<std::tuple<std::string, BoundKind, double>, std::map<int, double>> rows;
    for (const auto& [key, cell] : g_cells)
        rows[{key.system, key.kind, key.eps}][key.order] = cell.value;
    for (const auto& [row, by_order] : rows) {
        const bool lower_bound = std::get<1>(row) == BoundKind::DistanceES ||
                                 std::get<1>(row) == BoundKind::DistanceTail;
        double prev = lower_bound ? -1e300 : 1e300;
        for (const auto& [order, value] : by_order) {
            const double tol = 10 * 2e-4 * (1.0 + std::abs(value));
            const bool ok = lower_bound ? value >= prev - tol : value <= prev + tol;
            if (!ok) {
                pass = false;
                detail += " " + std::get<0>(row) + "/" +
                          assemble::kind_name(std::get<1>(row)) + " d" +
                          std::to_string(order);
            }
            prev = value;
        }
    }
    report(9, pass, pass ? "all cached hierarchies monotone" : "violations:" + detail);
}

void criterion_10(const std::map<std::string, double>& mc_sup) {
    // every tail/shortfall bound must sit above its MC statistic - 3 SE;
    // the MC map carries (value - 3 SE) keyed by system/kind/eps
    bool pass = true;
    std::string detail;
    int checked = 0;
    for (const auto& [key, cell] : g_cells) {
        if (key.kind == BoundKind::DistanceES || key.kind == BoundKind::DistanceTail)
            continue;  // lower bounds, handled in criterion 8
        const std::string tag = key.system + "/" +
                                std::string(assemble::kind_name(key.kind)) + "/" +
                                fmt(key.eps);
        auto it = mc_sup.find(tag);
        if (it == mc_sup.end()) continue;
        ++checked;
        if (cell.value < it->second) {
            pass = false;
            detail += " " + tag + " d" + std::to_string(key.order) + ": " +
                      fmt(cell.value) + " < " + fmt(it->second);
        }
    }
    report(10, pass,
           pass ? std::to_string(checked) + " cells dominate their MC statistics"
                : "violations:" + detail);
}

void criterion_11() {
    std::mt19937_64 rng(2718);
    bool pass = true;
    for (int trial = 0; trial < 100 && pass; ++trial) {
        std::uniform_int_distribution<int> nd(5, 200);
        std::uniform_real_distribution<double> val(-5.0, 5.0);
        std::uniform_real_distribution<double> ed(0.02, 0.45);
        risk::EmpiricalDistribution d;
        d.samples.resize(nd(rng));
        for (auto& s : d.samples) s = val(rng);
        const double eps = ed(rng);
        double mean = 0.0;
        for (double s : d.samples) mean += s;
        mean /= static_cast<double>(d.samples.size());
        double var = 0.0;
        for (double s : d.samples) var += (s - mean) * (s - mean);
        var /= static_cast<double>(d.samples.size());
        const double cant =
            risk::tail_bound(mean, std::sqrt(var), eps, risk::TailKind::Cantelli);
        const double es = risk::empirical_es(d, eps);
        const double var_q = risk::empirical_var(d, eps);
        if (!(cant >= es - 1e-12 && es >= var_q - 1e-12)) pass = false;
    }
    report(11, pass, "sample Cantelli >= ES >= VaR on 100 random sample sets");
}

void criterion_12() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> pos(0.2, 1.5), off(-1.0, 1.0),
        ed(0.02, 0.4);
    bool pass = true;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        // frozen two-state process with a random linear objective
        assemble::BoundSpec spec;
        spec.process.state_dim = 2;
        spec.process.horizon = 1.0;
        model::ItoSDE sde;
        sde.drift = {poly::Polynomial::zero(3), poly::Polynomial::zero(3)};
        spec.process.dynamics = sde;
        spec.X = model::make_box_set({-1.5, -1.5}, {1.5, 1.5});
        spec.init = model::InitialCondition::dirac({off(rng), off(rng)});
        spec.p = poly::Polynomial::variable(2, 0) * pos(rng) +
                 poly::Polynomial::variable(2, 1) * off(rng);
        spec.kind = BoundKind::Cantelli;
        spec.eps = ed(rng);
        spec.order = 2;
        auto direct = assemble::solve_bound(spec);
        spec.soc_as_psd = true;
        auto embedded = assemble::solve_bound(spec);
        if (direct.status == conic::SolveStatus::Optimal)
            g_optimal_gaps.emplace_back(std::abs(direct.duality_gap),
                                        std::abs(direct.value));
        if (embedded.status == conic::SolveStatus::Optimal)
            g_optimal_gaps.emplace_back(std::abs(embedded.duality_gap),
                                        std::abs(embedded.value));
        const double scale = 1.0 + std::abs(direct.value);
        worst = std::max(worst, std::abs(direct.value - embedded.value) / scale);
        if (std::abs(direct.value - embedded.value) > 1e-6 * scale) pass = false;
    }
    report(12, pass,
           "20 tail programs, SOC vs PSD embedding, worst relative gap " +
               std::to_string(worst));
}

void criterion_13() {
    bool gaps_ok = true;
    for (const auto& [gap, value] : g_optimal_gaps)
        if (gap > 1e-8 + 1e-8 * value) gaps_ok = false;

    // certify a converged mean cell: certificate grid violations <= 1e-5 scale
    auto spec = io::to_bound_spec(g_problems.at("flow"), BoundKind::Mean, 0.5, 2);
    auto prog = assemble::build(spec);
    conic::SolverSettings settings;
    settings.max_iter = 30000;
    auto res = assemble::solve_assembled(spec, prog, settings);
    auto cert = assemble::extract_certificate(spec, prog, res.solution);
    auto rep = assemble::verify_certificate(cert, spec);
    const bool cert_ok = rep.worst() <= 1e-5 * rep.scale;
    report(13, gaps_ok && cert_ok,
           std::to_string(g_optimal_gaps.size()) +
               " optimal solves within gap tolerance; certificate worst violation " +
               std::to_string(rep.worst()) + " (scale " + fmt(rep.scale) + ")");
}

void criterion_14() {
    std::mt19937_64 rng(31415);
    bool pass = true;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        // random discrete distribution with rational weights k_i / M so the
        // sorted-tail oracle over k_i replicated copies is exact
        std::uniform_int_distribution<int> na(2, 8), kw(1, 20);
        std::uniform_real_distribution<double> val(-2.0, 2.0);
        const int atoms = na(rng);
        std::vector<double> s(atoms);
        std::vector<int> k(atoms);
        int M = 0;
        for (int i = 0; i < atoms; ++i) {
            s[i] = val(rng);
            k[i] = kw(rng);
            M += k[i];
        }
        std::uniform_int_distribution<int> jd(1, M - 1);
        const double eps = static_cast<double>(jd(rng)) / M;  // N eps integer

        // direct LP: variables (nu_i, nuhat_i) >= 0 per atom; the splitting
        // constraint eps nu_i + nuhat_i = w_i with unit shortfall mass;
        // maximize sum s_i nu_i
        conic::ConicProgram lp;
        const int nu = lp.add_vars(atoms);
        const int nuhat = lp.add_vars(atoms);
        lp.c.assign(2 * atoms, 0.0);
        for (int i = 0; i < atoms; ++i) lp.c[static_cast<size_t>(nu + i)] = s[i];
        const int eq = lp.add_block(conic::ConeType::Zero, atoms);
        for (int i = 0; i < atoms; ++i) {
            lp.add_entry(eq + i, nu + i, eps);
            lp.add_entry(eq + i, nuhat + i, 1.0);
            lp.set_rhs(eq + i, static_cast<double>(k[i]) / M);
        }
        const int mass = lp.add_block(conic::ConeType::Zero, 1);
        for (int i = 0; i < atoms; ++i) lp.add_entry(mass, nu + i, 1.0);
        lp.set_rhs(mass, 1.0);
        const int nn = lp.add_block(conic::ConeType::Nonneg, 2 * atoms);
        for (int i = 0; i < 2 * atoms; ++i) lp.add_entry(nn + i, i, -1.0);
        auto sol = conic::solve(lp, {});
        if (sol.status == conic::SolveStatus::Optimal)
            g_optimal_gaps.emplace_back(std::abs(sol.primal_obj - sol.dual_obj),
                                        std::abs(sol.primal_obj));

        risk::EmpiricalDistribution d;
        for (int i = 0; i < atoms; ++i)
            d.samples.insert(d.samples.end(), static_cast<size_t>(k[i]), s[i]);
        const double oracle = risk::empirical_es(d, eps);
        const double diff = std::abs(sol.primal_obj - oracle);
        worst = std::max(worst, diff);
        if (diff > 1e-7) pass = false;
    }
    report(14, pass,
           "50 random shortfall LPs vs sorted-tail oracle, worst |diff| " +
               std::to_string(worst));
}

void criterion_15() {
    const auto& prob = g_problems.at("flow");
    const auto& sde = std::get<model::ItoSDE>(prob.process.dynamics);
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> ux(-0.5, 1.5), uy(-0.5, 1.0),
        ut(0.5, 4.0), coef(-1.0, 1.0);
    const double h = 1e-3;
    const int n_samples = 200000;
    std::normal_distribution<double> gauss(0.0, 1.0);
    bool pass = true;
    std::string detail;
    for (int trial = 0; trial < 5; ++trial) {
        const double t = ut(rng), x1 = ux(rng), x2 = uy(rng);
        // random quadratic test function v(t, x)
        poly::Polynomial v = poly::Polynomial::zero(3);
        for (const auto& mi : poly::basis_monomials(3, 2))
            v = v + poly::Polynomial::monomial(mi, coef(rng));
        const auto Lv = model::generator_apply(sde, 2, v);
        const double lv = Lv.evaluate({t, x1, x2});

        const double f1 = sde.drift[0].evaluate({t, x1, x2});
        const double f2 = sde.drift[1].evaluate({t, x1, x2});
        const double g2 = sde.diffusion_cols[0][1].evaluate({t, x1, x2});
        const double v0 = v.evaluate({t, x1, x2});
        double acc = 0.0, acc2 = 0.0;
        for (int i = 0; i < n_samples; ++i) {
            const double dw = gauss(rng) * std::sqrt(h);
            const double y1 = x1 + f1 * h;
            const double y2 = x2 + f2 * h + g2 * dw;
            const double drift = (v.evaluate({t + h, y1, y2}) - v0) / h;
            acc += drift;
            acc2 += drift * drift;
        }
        const double mean = acc / n_samples;
        const double se =
            std::sqrt(std::max(0.0, acc2 / n_samples - mean * mean) / n_samples);
        // O(h) bias budget from the second difference of v along the flow
        const double z1 = x1 + f1 * 2 * h, z2 = x2 + f2 * 2 * h;
        const double second_diff =
            std::abs((v.evaluate({t + 2 * h, z1, z2}) -
                      2 * v.evaluate({t + h, x1 + f1 * h, x2 + f2 * h}) + v0) /
                     (h * h));
        const double budget = 3 * se + 2 * h * second_diff;
        if (std::abs(mean - lv) > budget) {
            pass = false;
            detail += " |" + fmt(mean) + "-" + fmt(lv) + "|>" + fmt(budget);
        }
    }
    report(15, pass,
           pass ? "5 random generator evaluations match the MC drift"
                : "violations:" + detail);
}

}  // namespace

int main() {
    g_problems = io::builtin_examples();

    criterion_1();
    criterion_2();

    // MC references (shared by criteria 4, 5, 8, 10)
    auto flow_ens = simulate_system("flow", 101, 20000);
    auto twist_ens = simulate_system("twist", 202, 10000);
    auto switched_ens = simulate_system("switched", 303, 10000);
    auto discrete_ens = simulate_system("discrete", 404, 50000);
    auto distance_ens = simulate_system("distance", 505, 2000, true, 50);

    std::map<std::string, double> mc_floor;  // value - 3 SE per system/kind/eps
    auto add_floor = [&](const std::string& sys, const mc::PathEnsemble& ens,
                         BoundKind kind, double eps, mc::SupStat stat) {
        const double v = mc::sup_statistic(ens, eps, stat).first;
        const double se = mc::sup_statistic_stderr(ens, eps, stat);
        mc_floor[sys + "/" + std::string(assemble::kind_name(kind)) + "/" + fmt(eps)] =
            v - 3 * se;
    };
    for (double eps : {0.15, 0.10, 0.05}) {
        add_floor("flow", flow_ens, BoundKind::VP, eps, mc::SupStat::VaR);
        add_floor("flow", flow_ens, BoundKind::ES, eps, mc::SupStat::ES);
    }
    add_floor("flow", flow_ens, BoundKind::Mean, 0.5, mc::SupStat::Mean);
    add_floor("twist", twist_ens, BoundKind::Mean, 0.5, mc::SupStat::Mean);
    add_floor("twist", twist_ens, BoundKind::ES, 0.15, mc::SupStat::ES);
    add_floor("discrete", discrete_ens, BoundKind::Mean, 0.5, mc::SupStat::Mean);
    add_floor("switched", switched_ens, BoundKind::VP, 0.15, mc::SupStat::VaR);
    add_floor("switched", switched_ens, BoundKind::ES, 0.10, mc::SupStat::ES);

    const double flow_es015 = mc::sup_statistic(flow_ens, 0.15, mc::SupStat::ES).first;
    const double flow_es015_se =
        mc::sup_statistic_stderr(flow_ens, 0.15, mc::SupStat::ES);
    const double twist_es = mc::sup_statistic(twist_ens, 0.15, mc::SupStat::ES).first;
    const double twist_es_se =
        mc::sup_statistic_stderr(twist_ens, 0.15, mc::SupStat::ES);
    const auto& dprob = g_problems.at("distance");
    const double mc_mean_dist = mc::distance_statistic(
        distance_ens, *dprob.unsafe_set, *dprob.metric, 0.5, mc::SupStat::Mean);
    const double mc_es_dist = mc::distance_statistic(
        distance_ens, *dprob.unsafe_set, *dprob.metric, 0.15, mc::SupStat::ES);

    criterion_3();
    criterion_4(flow_es015, flow_es015_se);
    criterion_5(twist_es, twist_es_se);
    criterion_6();
    criterion_7();
    criterion_8(mc_mean_dist, mc_es_dist);
    criterion_9();
    criterion_10(mc_floor);
    criterion_11();
    criterion_12();
    criterion_13();
    criterion_14();
    criterion_15();

    std::printf("%s (%d/15)\n", g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES",
                15 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
