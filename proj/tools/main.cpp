// peakrisk: certified upper bounds on the maximum Value-at-Risk of a
// polynomial state function along stochastic process trajectories.
//
// Subcommands:
//   bound           solve one (kind, eps, order) cell, print JSON
//   table           sweep orders/eps/kinds, print CSV (and solver times)
//   mc              Monte Carlo sup statistics with standard errors
//   certify         extract and grid-check the dual certificate of a cell
//   write-examples  emit the bundled benchmark problem files
//
// Exit codes: 0 success, 2 input/schema error, 3 solver non-optimal.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "peakrisk/assemble.hpp"
#include "peakrisk/mcoracle.hpp"
#include "peakrisk/problem_io.hpp"

using namespace peakrisk;
using nlohmann::json;

namespace {

assemble::BoundKind parse_kind(const std::string& k) {
    if (k == "mean") return assemble::BoundKind::Mean;
    if (k == "cantelli") return assemble::BoundKind::Cantelli;
    if (k == "vp") return assemble::BoundKind::VP;
    if (k == "es") return assemble::BoundKind::ES;
    if (k == "distance-es") return assemble::BoundKind::DistanceES;
    if (k == "distance-tail") return assemble::BoundKind::DistanceTail;
    throw io::SchemaError("unknown bound kind '" + k + "'");
}

const char* status_str(conic::SolveStatus s) {
    switch (s) {
        case conic::SolveStatus::Optimal: return "optimal";
        case conic::SolveStatus::Inaccurate: return "inaccurate";
        case conic::SolveStatus::Infeasible: return "infeasible";
        case conic::SolveStatus::Unbounded: return "unbounded";
        case conic::SolveStatus::IterLimit: return "iter-limit";
    }
    return "unknown";
}

struct CellOutcome {
    assemble::BoundResult result;
    double seconds = 0.0;
};

CellOutcome run_cell(const io::Problem& prob, assemble::BoundKind kind, double eps,
                     int order, const conic::SolverSettings& settings) {
    auto spec = io::to_bound_spec(prob, kind, eps, order);
    const auto t0 = std::chrono::steady_clock::now();
    CellOutcome out;
    out.result = assemble::solve_bound(spec, settings);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

json cell_json(const CellOutcome& c) {
    return {{"value", c.result.value},
            {"status", status_str(c.result.status)},
            {"gap", c.result.duality_gap},
            {"iterations", c.result.iterations},
            {"seconds", c.seconds}};
}

int cmd_bound(const std::string& file, const std::string& kind, double eps,
              int order, int max_iter, const std::string& export_path) {
    auto prob = io::load_problem(file);
    auto k = parse_kind(kind);
    if (!export_path.empty()) {
        auto spec = io::to_bound_spec(prob, k, eps, order);
        auto assembled = assemble::build(spec);
        std::ofstream out(export_path);
        out << conic::export_portable(assembled.program);
    }
    conic::SolverSettings settings;
    settings.max_iter = max_iter;
    auto cell = run_cell(prob, k, eps, order, settings);
    std::cout << cell_json(cell).dump(2) << "\n";
    return cell.result.status == conic::SolveStatus::Optimal ||
                   cell.result.status == conic::SolveStatus::Inaccurate
               ? 0
               : 3;
}

int cmd_table(const std::string& file, std::vector<std::string> kinds,
              std::vector<double> eps_list, std::vector<int> orders, bool with_mc,
              int max_iter, std::uint64_t seed) {
    auto prob = io::load_problem(file);
    conic::SolverSettings settings;
    settings.max_iter = max_iter;

    // MC column first (one simulation serves every row)
    std::map<std::pair<std::string, double>, double> mc_col;
    if (with_mc) {
        mc::SimConfig cfg;
        cfg.seed = seed;
        auto ens = mc::simulate(prob.process, prob.X, prob.init, prob.objective, cfg);
        for (const auto& kind : kinds)
            for (double eps : eps_list) {
                mc::SupStat stat = kind == "es" ? mc::SupStat::ES
                                   : kind == "mean" ? mc::SupStat::Mean
                                                    : mc::SupStat::VaR;
                mc_col[{kind, eps}] =
                    mc::sup_statistic(ens, kind == "mean" ? 0.5 : eps, stat).first;
            }
    }

    std::printf("kind,eps");
    for (int d : orders) std::printf(",order%d", d);
    if (with_mc) std::printf(",mc");
    std::printf("\n");
    std::vector<std::string> time_rows;
    for (const auto& kind : kinds) {
        for (double eps : eps_list) {
            std::printf("%s,%g", kind.c_str(), eps);
            std::string trow = kind + "," + std::to_string(eps);
            for (int d : orders) {
                try {
                    auto cell = run_cell(prob, parse_kind(kind), eps, d, settings);
                    std::printf(",%.6g", cell.result.value);
                    trow += "," + std::to_string(cell.seconds);
                } catch (const std::exception& e) {
                    std::printf(",failed");
                    trow += ",failed";
                    std::fprintf(stderr, "cell (%s, %g, %d) failed: %s\n",
                                 kind.c_str(), eps, d, e.what());
                }
                std::fflush(stdout);
            }
            if (with_mc) std::printf(",%.6g", mc_col[{kind, eps}]);
            std::printf("\n");
            time_rows.push_back(std::move(trow));
            if (kind == "mean") break;  // eps plays no role
        }
    }
    std::printf("\n# solver seconds\n");
    for (const auto& r : time_rows) std::printf("%s\n", r.c_str());
    return 0;
}

int cmd_mc(const std::string& file, std::vector<double> eps_list,
           std::vector<std::string> stats, int n_paths, std::uint64_t seed) {
    auto prob = io::load_problem(file);
    mc::SimConfig cfg;
    cfg.n_paths = n_paths;
    cfg.seed = seed;
    const bool distance = prob.unsafe_set.has_value();
    auto ens = mc::simulate(prob.process, prob.X, prob.init, prob.objective, cfg,
                            distance);
    std::printf("stat,eps,value,stderr,argmax_t\n");
    for (const auto& s : stats) {
        mc::SupStat stat = s == "es"     ? mc::SupStat::ES
                           : s == "mean" ? mc::SupStat::Mean
                           : s == "var"  ? mc::SupStat::VaR
                           : s == "cantelli" ? mc::SupStat::CantelliEmp
                                             : mc::SupStat::VPEmp;
        for (double eps : eps_list) {
            if (distance) {
                const double v =
                    mc::distance_statistic(ens, *prob.unsafe_set, *prob.metric, eps, stat);
                std::printf("distance-%s,%g,%.6g,,\n", s.c_str(), eps, v);
            } else {
                auto [v, t] = mc::sup_statistic(ens, eps, stat);
                const double se = mc::sup_statistic_stderr(ens, eps, stat);
                std::printf("%s,%g,%.6g,%.3g,%.4g\n", s.c_str(), eps, v, se, t);
            }
            if (s == "mean") break;
        }
    }
    return 0;
}

int cmd_certify(const std::string& file, const std::string& kind, double eps,
                int order, int grid, int max_iter) {
    auto prob = io::load_problem(file);
    auto spec = io::to_bound_spec(prob, parse_kind(kind), eps, order);
    auto assembled = assemble::build(spec);
    conic::SolverSettings settings;
    settings.max_iter = max_iter;
    auto res = assemble::solve_assembled(spec, assembled, settings);
    if (res.status != conic::SolveStatus::Optimal &&
        res.status != conic::SolveStatus::Inaccurate) {
        std::fprintf(stderr, "cell is %s; refusing to certify\n",
                     status_str(res.status));
        return 3;
    }
    auto cert = assemble::extract_certificate(spec, assembled, res.solution);
    auto rep = assemble::verify_certificate(cert, spec, grid);
    json out = {{"value", res.value},
                {"status", status_str(res.status)},
                {"dual_value", cert.dual_value},
                {"violations",
                 {{"generator", rep.generator},
                  {"dominance", rep.dominance},
                  {"scalar_lower", rep.scalar_lower},
                  {"w_negative", rep.w_negative}}},
                {"scale", rep.scale},
                {"worst", rep.worst()}};
    std::cout << out.dump(2) << "\n";
    return rep.worst() <= 1e-5 * rep.scale ? 0 : 3;
}

int cmd_write_examples(const std::string& dir) {
    for (const auto& [name, prob] : io::builtin_examples()) {
        const std::string path = dir + "/" + name + ".json";
        std::ofstream out(path);
        if (!out) throw io::SchemaError("cannot write " + path);
        out << io::problem_to_json(prob).dump(2) << "\n";
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified VaR upper bounds along stochastic trajectories"};
    app.require_subcommand(1);

    std::string file, kind = "mean", export_path, dir = ".";
    double eps = 0.15;
    int order = 2, grid = 25, max_iter = 20000, n_paths = 50000;
    std::uint64_t seed = 0;
    std::vector<std::string> kinds{"mean"}, stats{"mean"};
    std::vector<double> eps_list{0.15};
    std::vector<int> orders{2, 3};

    auto* bound = app.add_subcommand("bound", "solve a single cell");
    bound->add_option("file", file)->required();
    bound->add_option("--kind", kind);
    bound->add_option("--eps", eps);
    bound->add_option("--order", order);
    bound->add_option("--max-iter", max_iter);
    bound->add_option("--export", export_path, "portable program dump");

    auto* table = app.add_subcommand("table", "sweep a table of cells");
    table->add_option("file", file)->required();
    table->add_option("--kinds", kinds)->delimiter(',');
    table->add_option("--eps-list", eps_list)->delimiter(',');
    table->add_option("--orders", orders)->delimiter(',');
    table->add_option("--max-iter", max_iter);
    table->add_option("--seed", seed);
    bool with_mc = false;
    table->add_flag("--mc", with_mc, "append a Monte Carlo column");

    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo sup statistics");
    mc_cmd->add_option("file", file)->required();
    mc_cmd->add_option("--eps-list", eps_list)->delimiter(',');
    mc_cmd->add_option("--stats", stats)->delimiter(',');
    mc_cmd->add_option("--n-paths", n_paths);
    mc_cmd->add_option("--seed", seed);

    auto* certify = app.add_subcommand("certify", "grid-check a dual certificate");
    certify->add_option("file", file)->required();
    certify->add_option("--kind", kind);
    certify->add_option("--eps", eps);
    certify->add_option("--order", order);
    certify->add_option("--grid", grid);
    certify->add_option("--max-iter", max_iter);

    auto* wex = app.add_subcommand("write-examples", "emit bundled problems");
    wex->add_option("dir", dir);

    CLI11_PARSE(app, argc, argv);

    try {
        if (bound->parsed())
            return cmd_bound(file, kind, eps, order, max_iter, export_path);
        if (table->parsed())
            return cmd_table(file, kinds, eps_list, orders, with_mc, max_iter, seed);
        if (mc_cmd->parsed()) return cmd_mc(file, eps_list, stats, n_paths, seed);
        if (certify->parsed())
            return cmd_certify(file, kind, eps, order, grid, max_iter);
        if (wex->parsed()) return cmd_write_examples(dir);
    } catch (const io::SchemaError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
