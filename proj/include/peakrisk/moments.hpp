#pragma once

// Truncated moment sequences: the graded-lex moment basis, the Riesz
// functional L_m mapping polynomials to linear expressions in the moment
// entries, and localizing-matrix specifications whose positive
// semidefiniteness relaxes "m are the moments of a measure supported where
// h >= 0".

#include <Eigen/Dense>
#include <unordered_map>
#include <vector>

#include "peakrisk/poly.hpp"

namespace peakrisk::moments {

using poly::MultiIndex;
using poly::Polynomial;

// coeff * m[index] with index into a MomentBasis; an affine expression in
// one measure's moment entries
struct LinTerm {
    int index;
    double coeff;
};

struct LinExpr {
    std::vector<LinTerm> terms;
    double constant = 0.0;
};

class MomentBasis {
  public:
    MomentBasis(int arity, int max_degree);

    int arity() const { return arity_; }
    int max_degree() const { return max_degree_; }
    int size() const { return static_cast<int>(monos_.size()); }
    const std::vector<MultiIndex>& monomials() const { return monos_; }
    const MultiIndex& monomial(int i) const { return monos_.at(static_cast<size_t>(i)); }
    // throws std::out_of_range if the monomial exceeds the truncation
    int index_of(const MultiIndex& mi) const;

    // L_m(p) as a linear expression in the moment entries
    LinExpr riesz(const Polynomial& p) const;

  private:
    int arity_, max_degree_;
    std::vector<MultiIndex> monos_;
    std::unordered_map<std::string, int> lookup_;  // packed-exponent key
};

// Localizing matrix M(h m) at relaxation order d: rows/columns indexed by
// monomials of degree <= d - ceil(deg h / 2), entry (i, j) equal to
// L_m(h * x^{b_i + b_j}). h = 1 gives the moment matrix itself. Entries are
// stored for the upper triangle in svec order (column-major, i <= j),
// without the sqrt(2) vectorization scale.
struct LocalizerSpec {
    int side = 0;
    std::vector<MultiIndex> row_basis;
    std::vector<LinExpr> entries;  // length side*(side+1)/2
};

LocalizerSpec localizer(const MomentBasis& basis, const Polynomial& h, int d);

// Evaluate a localizer numerically for a concrete moment vector.
Eigen::MatrixXd localizer_value(const LocalizerSpec& spec, const Eigen::VectorXd& m);

}  // namespace peakrisk::moments
