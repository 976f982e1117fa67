#include "peakrisk/moments.hpp"

#include <stdexcept>
#include <string>

namespace peakrisk::moments {

namespace {

std::string pack_key(const MultiIndex& mi) {
    std::string key;
    key.reserve(mi.size() * 3);
    for (int e : mi) {
        key += std::to_string(e);
        key += ',';
    }
    return key;
}

}  // namespace

MomentBasis::MomentBasis(int arity, int max_degree) : arity_(arity), max_degree_(max_degree) {
    if (arity < 1) throw std::invalid_argument("MomentBasis: arity must be >= 1");
    if (max_degree < 0) throw std::invalid_argument("MomentBasis: negative degree");
    monos_ = poly::basis_monomials(arity, max_degree);
    lookup_.reserve(monos_.size());
    for (size_t i = 0; i < monos_.size(); ++i)
        lookup_.emplace(pack_key(monos_[i]), static_cast<int>(i));
}

int MomentBasis::index_of(const MultiIndex& mi) const {
    auto it = lookup_.find(pack_key(mi));
    if (it == lookup_.end())
        throw std::out_of_range("MomentBasis: monomial outside the truncation");
    return it->second;
}

LinExpr MomentBasis::riesz(const Polynomial& p) const {
    if (p.arity() != arity_) throw std::invalid_argument("riesz: arity mismatch");
    LinExpr e;
    e.terms.reserve(p.terms().size());
    for (const auto& [mi, coeff] : p.terms()) e.terms.push_back({index_of(mi), coeff});
    return e;
}

LocalizerSpec localizer(const MomentBasis& basis, const Polynomial& h, int d) {
    if (h.arity() != basis.arity()) throw std::invalid_argument("localizer: arity mismatch");
    if (h.is_zero()) throw std::invalid_argument("localizer: zero constraint polynomial");
    const int dh = (h.degree() + 1) / 2;  // ceil(deg h / 2)
    const int row_deg = d - dh;
    if (row_deg < 0)
        throw std::invalid_argument("localizer: constraint degree exceeds relaxation order");
    if (2 * d > basis.max_degree())
        throw std::invalid_argument("localizer: moment truncation too short");

    LocalizerSpec spec;
    spec.row_basis = poly::basis_monomials(basis.arity(), row_deg);
    spec.side = static_cast<int>(spec.row_basis.size());
    spec.entries.reserve(static_cast<size_t>(spec.side) * (spec.side + 1) / 2);
    for (int j = 0; j < spec.side; ++j) {
        for (int i = 0; i <= j; ++i) {
            MultiIndex prod(basis.arity());
            for (int k = 0; k < basis.arity(); ++k)
                prod[k] = spec.row_basis[i][k] + spec.row_basis[j][k];
            LinExpr e;
            for (const auto& [mi, coeff] : h.terms()) {
                MultiIndex full = prod;
                for (int k = 0; k < basis.arity(); ++k) full[k] += mi[k];
                e.terms.push_back({basis.index_of(full), coeff});
            }
            spec.entries.push_back(std::move(e));
        }
    }
    return spec;
}

Eigen::MatrixXd localizer_value(const LocalizerSpec& spec, const Eigen::VectorXd& m) {
    Eigen::MatrixXd M(spec.side, spec.side);
    size_t p = 0;
    for (int j = 0; j < spec.side; ++j) {
        for (int i = 0; i <= j; ++i, ++p) {
            double v = spec.entries[p].constant;
            for (const auto& t : spec.entries[p].terms) v += t.coeff * m[t.index];
            M(i, j) = v;
            M(j, i) = v;
        }
    }
    return M;
}

}  // namespace peakrisk::moments
