#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "peakrisk/conic.hpp"

#include <cmath>
#include <random>

using namespace peakrisk::conic;

namespace {
SolverSettings fast_settings() {
    SolverSettings s;
    return s;
}
}  // namespace

TEST_CASE("cone projections: nonnegative and zero") {
    std::vector<ConeBlock> cones = {{ConeType::Nonneg, 3}, {ConeType::Zero, 2}};
    Eigen::VectorXd v(5);
    v << -1.0, 2.0, 0.0, 5.0, -3.0;
    Eigen::VectorXd p = project_cone(v, cones);
    CHECK(p[0] == 0.0);
    CHECK(p[1] == 2.0);
    CHECK(p[2] == 0.0);
    CHECK(p[3] == 0.0);  // zero cone collapses
    CHECK(p[4] == 0.0);
    // dual of the zero cone is everything
    Eigen::VectorXd q = project_dual_cone(v, cones);
    CHECK(q[3] == 5.0);
    CHECK(q[4] == -3.0);
}

TEST_CASE("second-order cone projection, (y, s) ordering") {
    std::vector<ConeBlock> cones = {{ConeType::SOC, 3}};
    // inside: unchanged
    Eigen::VectorXd in(3);
    in << 0.3, 0.4, 1.0;
    CHECK((project_cone(in, cones) - in).norm() == doctest::Approx(0.0));
    // polar: maps to zero
    Eigen::VectorXd pol(3);
    pol << 0.3, 0.4, -1.0;
    CHECK(project_cone(pol, cones).norm() == doctest::Approx(0.0));
    // boundary case: (3, 4, 0) -> |y| = 5, s = 0 -> scaled to (1.5, 2, 2.5)
    Eigen::VectorXd mid(3);
    mid << 3.0, 4.0, 0.0;
    Eigen::VectorXd pm = project_cone(mid, cones);
    CHECK(pm[0] == doctest::Approx(1.5));
    CHECK(pm[1] == doctest::Approx(2.0));
    CHECK(pm[2] == doctest::Approx(2.5));
}

TEST_CASE("PSD projection clips negative eigenvalues") {
    std::vector<ConeBlock> cones = {{ConeType::PSD, 2}};
    // svec of diag(1, -1): (1, 0, -1); projection is svec of diag(1, 0)
    Eigen::VectorXd v(3);
    v << 1.0, 0.0, -1.0;
    Eigen::VectorXd p = project_cone(v, cones);
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(0.0));
    CHECK(p[2] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Moreau decomposition holds for self-dual blocks") {
    std::vector<ConeBlock> cones = {{ConeType::PSD, 3}, {ConeType::SOC, 4}, {ConeType::Nonneg, 2}};
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    Eigen::VectorXd v(6 + 4 + 2);
    for (int i = 0; i < v.size(); ++i) v[i] = g(rng);
    Eigen::VectorXd pp = project_cone(v, cones);
    Eigen::VectorXd pn = project_cone(-v, cones);
    CHECK((pp - pn - v).norm() == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(std::abs(pp.dot(pn)) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("linear program with box constraints") {
    // max x1 + 2 x2  s.t.  0 <= x1 <= 1, 0 <= x2 <= 2  ->  5 at (1, 2)
    ConicProgram p;
    p.add_vars(2);
    p.c = {1.0, 2.0};
    int r = p.add_block(ConeType::Nonneg, 4);
    p.set_rhs(r + 0, 1.0);
    p.add_entry(r + 0, 0, 1.0);  // 1 - x1 >= 0
    p.set_rhs(r + 1, 2.0);
    p.add_entry(r + 1, 1, 1.0);  // 2 - x2 >= 0
    p.add_entry(r + 2, 0, -1.0);  // x1 >= 0
    p.add_entry(r + 3, 1, -1.0);  // x2 >= 0
    auto sol = solve(p, fast_settings());
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.primal_obj == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sol.x[1] == doctest::Approx(2.0).epsilon(1e-6));
    // weak duality at optimality: objectives agree to tolerance
    CHECK(sol.dual_obj == doctest::Approx(sol.primal_obj).epsilon(1e-6));
}

TEST_CASE("equality rows use the zero cone with free duals") {
    // max -x2 s.t. x1 + x2 = 3, x1 <= 1  ->  x1 = 1, x2 = 2, obj -2
    ConicProgram p;
    p.add_vars(2);
    p.c = {0.0, -1.0};
    int rz = p.add_block(ConeType::Zero, 1);
    p.set_rhs(rz, 3.0);
    p.add_entry(rz, 0, 1.0);
    p.add_entry(rz, 1, 1.0);
    int rn = p.add_block(ConeType::Nonneg, 1);
    p.set_rhs(rn, 1.0);
    p.add_entry(rn, 0, 1.0);
    auto sol = solve(p, fast_settings());
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.primal_obj == doctest::Approx(-2.0).epsilon(1e-6));
    // the equality multiplier is negative here, allowed for zero-cone rows
    CHECK(sol.y[0] < 0.0);
}

TEST_CASE("second-order program: maximize a coordinate on the unit disk") {
    // max x1 + x2 s.t. |(x1, x2)| <= sqrt(2)  ->  2 at (1, 1)
    ConicProgram p;
    p.add_vars(2);
    p.c = {1.0, 1.0};
    int r = p.add_block(ConeType::SOC, 3);
    p.add_entry(r + 0, 0, -1.0);
    p.add_entry(r + 1, 1, -1.0);
    p.set_rhs(r + 2, std::sqrt(2.0));
    auto sol = solve(p, fast_settings());
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.primal_obj == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("semidefinite program: correlation matrix completion") {
    // max x s.t. [[1, x], [x, 1]] is PSD  ->  x = 1
    ConicProgram p;
    p.add_vars(1);
    p.c = {1.0};
    int r = p.add_block(ConeType::PSD, 2);
    p.set_rhs(r + 0, 1.0);
    p.set_rhs(r + 2, 1.0);
    p.add_entry(r + 1, 0, -std::sqrt(2.0));  // svec off-diagonal scale
    auto sol = solve(p, fast_settings());
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.primal_obj == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("infeasible program is certified") {
    // x >= 1 and x <= 0
    ConicProgram p;
    p.add_vars(1);
    p.c = {0.0};
    int r = p.add_block(ConeType::Nonneg, 2);
    p.set_rhs(r + 0, -1.0);
    p.add_entry(r + 0, 0, -1.0);  // -1 + x >= 0
    p.add_entry(r + 1, 0, 1.0);   // -x >= 0
    auto sol = solve(p, fast_settings());
    CHECK(sol.status == SolveStatus::Infeasible);
    // certificate: y in K*, A'y ~ 0, b'y < 0
    CHECK(sol.y.minCoeff() >= -1e-9);
}

TEST_CASE("unbounded program is certified") {
    ConicProgram p;
    p.add_vars(1);
    p.c = {1.0};
    int r = p.add_block(ConeType::Nonneg, 1);
    p.add_entry(r, 0, -1.0);  // x >= 0, maximize x
    auto sol = solve(p, fast_settings());
    CHECK(sol.status == SolveStatus::Unbounded);
}

TEST_CASE("iteration limit reports IterLimit without throwing") {
    ConicProgram p;
    p.add_vars(2);
    p.c = {1.0, 1.0};
    int r = p.add_block(ConeType::SOC, 3);
    p.add_entry(r + 0, 0, -1.0);
    p.add_entry(r + 1, 1, -1.0);
    p.set_rhs(r + 2, std::sqrt(2.0));
    SolverSettings s;
    s.max_iter = 3;
    s.check_interval = 1;
    auto sol = solve(p, s);
    CHECK((sol.status == SolveStatus::IterLimit || sol.status == SolveStatus::Inaccurate));
}

TEST_CASE("determinism: identical inputs give identical iterates") {
    ConicProgram p;
    p.add_vars(2);
    p.c = {1.0, 1.0};
    int r = p.add_block(ConeType::SOC, 3);
    p.add_entry(r + 0, 0, -1.0);
    p.add_entry(r + 1, 1, -1.0);
    p.set_rhs(r + 2, std::sqrt(2.0));
    auto a = solve(p, fast_settings());
    auto b = solve(p, fast_settings());
    CHECK(a.iterations == b.iterations);
    CHECK(a.x == b.x);  // bitwise
    CHECK(a.y == b.y);
}

TEST_CASE("arrow-matrix embedding preserves the optimum") {
    ConicProgram p;
    p.add_vars(2);
    p.c = {1.0, 1.0};
    int r = p.add_block(ConeType::SOC, 3);
    p.add_entry(r + 0, 0, -1.0);
    p.add_entry(r + 1, 1, -1.0);
    p.set_rhs(r + 2, std::sqrt(2.0));
    int rn = p.add_block(ConeType::Nonneg, 1);
    p.set_rhs(rn, 10.0);
    p.add_entry(rn, 0, 1.0);

    ConicProgram q = soc_to_psd(p);
    CHECK(q.cones[0].type == ConeType::PSD);
    CHECK(q.cones[1].type == ConeType::Nonneg);
    auto sp = solve(p, fast_settings());
    auto sq = solve(q, fast_settings());
    REQUIRE(sp.status == SolveStatus::Optimal);
    REQUIRE(sq.status == SolveStatus::Optimal);
    CHECK(sq.primal_obj == doctest::Approx(sp.primal_obj).epsilon(1e-6));
}

TEST_CASE("portable dump round-trips exactly") {
    ConicProgram p;
    p.add_vars(2);
    p.c = {1.0, -0.125};
    int r = p.add_block(ConeType::SOC, 3);
    p.add_entry(r + 0, 0, -1.0);
    p.add_entry(r + 1, 1, -1.0);
    p.set_rhs(r + 2, 1.5);
    p.add_block(ConeType::Zero, 1);
    p.set_rhs(r + 3, 0.25);
    p.add_entry(r + 3, 0, 1.0);
    p.add_entry(r + 3, 1, 1.0);

    std::string dump = export_portable(p);
    ConicProgram q = import_portable(dump);
    CHECK(q.num_vars == p.num_vars);
    CHECK(q.c == p.c);
    CHECK(q.b == p.b);
    REQUIRE(q.cones.size() == p.cones.size());
    CHECK(export_portable(q) == dump);  // canonical form is a fixed point

    auto sp = solve(p, fast_settings());
    auto sq = solve(q, fast_settings());
    CHECK(sp.primal_obj == doctest::Approx(sq.primal_obj).epsilon(1e-9));
}

TEST_CASE("validate rejects malformed programs") {
    ConicProgram p;
    p.add_vars(1);
    p.c = {1.0, 2.0};  // wrong length
    CHECK_THROWS(p.validate());
    ConicProgram q;
    q.add_vars(1);
    q.c = {1.0};
    q.add_block(ConeType::Nonneg, 1);
    CHECK_THROWS(q.add_entry(5, 0, 1.0));
    CHECK_THROWS(q.add_block(ConeType::SOC, 1));
}
