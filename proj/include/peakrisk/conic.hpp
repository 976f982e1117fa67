#pragma once

// Standard-form conic optimization over zero / nonnegative / second-order /
// PSD cones, solved by an operator-splitting first-order method on the
// homogeneous self-dual embedding with primal-dual residual termination.
//
// Problem convention:  maximize c'x  subject to  b - Ax in K.
// PSD blocks are vectorized to side*(side+1)/2 entries with off-diagonal
// entries scaled by sqrt(2), so the vector inner product equals the matrix
// trace inner product. SOC blocks are ordered (y, s) with s >= |y| last.

#include <Eigen/Sparse>
#include <string>
#include <vector>

namespace peakrisk::conic {

enum class ConeType { Zero, Nonneg, SOC, PSD };

struct ConeBlock {
    ConeType type;
    int size;  // PSD: matrix side; others: vector length (SOC >= 2)
};

inline int block_vec_len(const ConeBlock& b) {
    return b.type == ConeType::PSD ? b.size * (b.size + 1) / 2 : b.size;
}

struct ConicProgram {
    int num_vars = 0;
    std::vector<double> c;  // maximize c'x
    std::vector<Eigen::Triplet<double>> A_triplets;
    std::vector<double> b;
    std::vector<ConeBlock> cones;

    int num_rows() const { return static_cast<int>(b.size()); }

    int add_vars(int k);
    // appends a cone block, returns the index of its first row
    int add_block(ConeType type, int size);
    void add_entry(int row, int col, double value);
    void set_rhs(int row, double value);
    void validate() const;
};

enum class SolveStatus { Optimal, Inaccurate, Infeasible, Unbounded, IterLimit };

const char* status_name(SolveStatus s);

struct SolverSettings {
    double eps_abs = 1e-8;
    double eps_rel = 1e-8;
    int max_iter = 200000;
    bool equilibrate = true;
    double alpha = 1.5;  // over-relaxation
    bool use_acceleration = true;
    int aa_memory = 15;
    int check_interval = 25;
    double eps_infeasible = 1e-9;
    bool verbose = false;
};

struct ConicSolution {
    Eigen::VectorXd x;  // primal
    Eigen::VectorXd y;  // dual multipliers of b - Ax in K (y in K*)
    Eigen::VectorXd s;  // slack b - Ax
    double primal_obj = 0.0;  // c'x
    double dual_obj = 0.0;    // b'y
    double res_primal = 0.0, res_dual = 0.0, res_gap = 0.0;
    SolveStatus status = SolveStatus::IterLimit;
    int iterations = 0;
};

// Blockwise Euclidean projection onto K.
Eigen::VectorXd project_cone(const Eigen::VectorXd& v, const std::vector<ConeBlock>& cones);
// Projection onto the dual cone K* (Zero rows become free).
Eigen::VectorXd project_dual_cone(const Eigen::VectorXd& v, const std::vector<ConeBlock>& cones);

ConicSolution solve(const ConicProgram& prog, const SolverSettings& settings = {});

// Equivalent program with every SOC block replaced by its arrow-matrix PSD
// embedding [[s, y'], [y, s I]].
ConicProgram soc_to_psd(const ConicProgram& prog);

// Deterministic JSON dump / reload, for cross-checks against external solvers.
std::string export_portable(const ConicProgram& prog);
ConicProgram import_portable(const std::string& text);

}  // namespace peakrisk::conic
