#pragma once

// Sparse multivariate polynomial arithmetic over the reals.
//
// A Polynomial is a map from exponent multi-indices to nonzero double
// coefficients, kept in canonical (graded-lex) order. Coefficients whose
// magnitude falls below kCoeffDropTol after arithmetic are dropped.
// All operations are pure; polynomials are immutable values once built.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace peakrisk::poly {

using MultiIndex = std::vector<int>;

inline int degree(const MultiIndex& mi) {
    int d = 0;
    for (int e : mi) d += e;
    return d;
}

// Graded lexicographic order: lower total degree first, ties broken
// lexicographically on the exponent vector. This is the canonical basis
// order used by every downstream moment structure.
struct GrlexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        int da = degree(a), db = degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

// Coefficients below this magnitude are treated as zero after arithmetic.
inline constexpr double kCoeffDropTol = 1e-14;

class Polynomial {
  public:
    using TermMap = std::map<MultiIndex, double, GrlexLess>;

    explicit Polynomial(int arity) : arity_(arity) {
        if (arity < 1) throw std::invalid_argument("Polynomial: arity must be >= 1");
    }
    Polynomial(int arity, TermMap terms);

    static Polynomial zero(int arity) { return Polynomial(arity); }
    static Polynomial constant(int arity, double c);
    static Polynomial variable(int arity, int var);
    static Polynomial monomial(const MultiIndex& mi, double coeff);

    int arity() const { return arity_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    // Degree of the zero polynomial is 0 for bookkeeping.
    int degree() const;
    double coeff(const MultiIndex& mi) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(double s) const;
    Polynomial pow(int k) const;

    // Replace each variable by its assignment polynomial (all assignments
    // share one arity) and expand.
    Polynomial substitute(const std::vector<Polynomial>& assignments) const;
    Polynomial partial_derivative(int var) const;
    double evaluate(const std::vector<double>& point) const;
    double evaluate(const double* point, int len) const;

    // Same polynomial viewed with k extra leading / trailing variables.
    Polynomial prepend_variables(int k) const;
    Polynomial append_variables(int k) const;

    std::string to_string() const;

  private:
    int arity_;
    TermMap terms_;  // invariant: no zero coefficients stored
};

inline Polynomial operator*(double s, const Polynomial& p) { return p * s; }

// All multi-indices of the given arity with degree <= max_degree, in graded
// lexicographic order; count = C(arity + max_degree, max_degree).
std::vector<MultiIndex> basis_monomials(int arity, int max_degree);

std::int64_t binomial(int n, int k);

// Flat term list for fast repeated evaluation in hot loops (Monte Carlo).
class CompiledPoly {
  public:
    CompiledPoly() = default;
    explicit CompiledPoly(const Polynomial& p);
    double eval(const double* point) const;
    int arity() const { return arity_; }

  private:
    struct Term {
        double coeff;
        std::vector<std::pair<int, int>> factors;  // (variable, exponent > 0)
    };
    int arity_ = 0;
    std::vector<Term> terms_;
};

}  // namespace peakrisk::poly
