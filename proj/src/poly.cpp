#include "peakrisk/poly.hpp"

#include <cmath>
#include <sstream>

namespace peakrisk::poly {

namespace {

void check_index(const MultiIndex& mi, int arity) {
    if (static_cast<int>(mi.size()) != arity)
        throw std::invalid_argument("Polynomial: multi-index length != arity");
    for (int e : mi)
        if (e < 0) throw std::invalid_argument("Polynomial: negative exponent");
}

}  // namespace

Polynomial::Polynomial(int arity, TermMap terms) : arity_(arity), terms_(std::move(terms)) {
    if (arity < 1) throw std::invalid_argument("Polynomial: arity must be >= 1");
    for (auto it = terms_.begin(); it != terms_.end();) {
        check_index(it->first, arity_);
        if (std::abs(it->second) < kCoeffDropTol)
            it = terms_.erase(it);
        else
            ++it;
    }
}

Polynomial Polynomial::constant(int arity, double c) {
    Polynomial p(arity);
    if (std::abs(c) >= kCoeffDropTol) p.terms_[MultiIndex(arity, 0)] = c;
    return p;
}

Polynomial Polynomial::variable(int arity, int var) {
    if (var < 0 || var >= arity) throw std::out_of_range("Polynomial::variable: index out of range");
    Polynomial p(arity);
    MultiIndex mi(arity, 0);
    mi[var] = 1;
    p.terms_[mi] = 1.0;
    return p;
}

Polynomial Polynomial::monomial(const MultiIndex& mi, double coeff) {
    Polynomial p(static_cast<int>(mi.size()));
    check_index(mi, p.arity_);
    if (std::abs(coeff) >= kCoeffDropTol) p.terms_[mi] = coeff;
    return p;
}

int Polynomial::degree() const {
    if (terms_.empty()) return 0;
    // terms_ is grlex-ordered, so the last term has maximal degree
    return poly::degree(terms_.rbegin()->first);
}

double Polynomial::coeff(const MultiIndex& mi) const {
    auto it = terms_.find(mi);
    return it == terms_.end() ? 0.0 : it->second;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    if (arity_ != o.arity_) throw std::invalid_argument("Polynomial::add: arity mismatch");
    TermMap out = terms_;
    for (const auto& [mi, c] : o.terms_) out[mi] += c;
    return Polynomial(arity_, std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const {
    TermMap out;
    for (const auto& [mi, c] : terms_) out[mi] = -c;
    return Polynomial(arity_, std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (arity_ != o.arity_) throw std::invalid_argument("Polynomial::mul: arity mismatch");
    TermMap out;
    MultiIndex mi(arity_);
    for (const auto& [a, ca] : terms_) {
        for (const auto& [b, cb] : o.terms_) {
            for (int i = 0; i < arity_; ++i) mi[i] = a[i] + b[i];
            out[mi] += ca * cb;
        }
    }
    return Polynomial(arity_, std::move(out));
}

Polynomial Polynomial::operator*(double s) const {
    TermMap out;
    for (const auto& [mi, c] : terms_) out[mi] = c * s;
    return Polynomial(arity_, std::move(out));
}

Polynomial Polynomial::pow(int k) const {
    if (k < 0) throw std::invalid_argument("Polynomial::pow: negative exponent");
    Polynomial result = constant(arity_, 1.0);
    for (int i = 0; i < k; ++i) result = result * *this;
    return result;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& assignments) const {
    if (static_cast<int>(assignments.size()) != arity_)
        throw std::invalid_argument("Polynomial::substitute: wrong assignment count");
    int target_arity = assignments.front().arity();
    for (const auto& a : assignments)
        if (a.arity() != target_arity)
            throw std::invalid_argument("Polynomial::substitute: assignments must share one arity");

    Polynomial result = Polynomial::zero(target_arity);
    for (const auto& [mi, c] : terms_) {
        Polynomial term = Polynomial::constant(target_arity, c);
        for (int v = 0; v < arity_; ++v)
            if (mi[v] > 0) term = term * assignments[v].pow(mi[v]);
        result = result + term;
    }
    return result;
}

Polynomial Polynomial::partial_derivative(int var) const {
    if (var < 0 || var >= arity_) throw std::out_of_range("partial_derivative: index out of range");
    TermMap out;
    for (const auto& [mi, c] : terms_) {
        if (mi[var] == 0) continue;
        MultiIndex m = mi;
        double coeff = c * m[var];
        m[var] -= 1;
        out[m] += coeff;
    }
    return Polynomial(arity_, std::move(out));
}

double Polynomial::evaluate(const std::vector<double>& point) const {
    if (static_cast<int>(point.size()) != arity_)
        throw std::invalid_argument("Polynomial::evaluate: point length != arity");
    return evaluate(point.data(), arity_);
}

double Polynomial::evaluate(const double* point, int len) const {
    if (len != arity_) throw std::invalid_argument("Polynomial::evaluate: point length != arity");
    double sum = 0.0;
    for (const auto& [mi, c] : terms_) {
        double t = c;
        for (int v = 0; v < arity_; ++v)
            for (int e = 0; e < mi[v]; ++e) t *= point[v];
        sum += t;
    }
    return sum;
}

Polynomial Polynomial::prepend_variables(int k) const {
    TermMap out;
    for (const auto& [mi, c] : terms_) {
        MultiIndex m(k, 0);
        m.insert(m.end(), mi.begin(), mi.end());
        out[m] = c;
    }
    return Polynomial(arity_ + k, std::move(out));
}

Polynomial Polynomial::append_variables(int k) const {
    TermMap out;
    for (const auto& [mi, c] : terms_) {
        MultiIndex m = mi;
        m.insert(m.end(), k, 0);
        out[m] = c;
    }
    return Polynomial(arity_ + k, std::move(out));
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mi, c] : terms_) {
        if (!first) os << (c >= 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        os << std::abs(c);
        for (int v = 0; v < arity_; ++v) {
            if (mi[v] == 0) continue;
            os << "*x" << v;
            if (mi[v] > 1) os << "^" << mi[v];
        }
        first = false;
    }
    return os.str();
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<MultiIndex> basis_monomials(int arity, int max_degree) {
    if (arity < 1) throw std::invalid_argument("basis_monomials: arity must be >= 1");
    if (max_degree < 0) throw std::invalid_argument("basis_monomials: max_degree must be >= 0");
    std::vector<MultiIndex> out;
    out.reserve(static_cast<size_t>(binomial(arity + max_degree, max_degree)));
    MultiIndex mi(arity, 0);
    // Enumerate by total degree, lexicographically within each degree.
    for (int d = 0; d <= max_degree; ++d) {
        // first multi-index of degree d in lex order: (0,...,0,d) is smallest?
        // lex on vectors: (0,..,0,d) < (0,..,1,d-1) < ... so start there.
        std::fill(mi.begin(), mi.end(), 0);
        mi[arity - 1] = d;
        while (true) {
            out.push_back(mi);
            // next composition of d into arity parts, in lex order
            int i = arity - 1;
            while (i > 0 && mi[i] == 0) --i;
            if (i == 0) break;  // (d,0,...,0) is lex-largest
            int v = mi[i];
            mi[i] = 0;
            mi[i - 1] += 1;
            mi[arity - 1] = v - 1;
        }
    }
    return out;
}

CompiledPoly::CompiledPoly(const Polynomial& p) : arity_(p.arity()) {
    for (const auto& [mi, c] : p.terms()) {
        Term t;
        t.coeff = c;
        for (int v = 0; v < arity_; ++v)
            if (mi[v] > 0) t.factors.emplace_back(v, mi[v]);
        terms_.push_back(std::move(t));
    }
}

double CompiledPoly::eval(const double* point) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
        double val = t.coeff;
        for (const auto& [v, e] : t.factors) {
            double x = point[v];
            double m = x;
            for (int i = 1; i < e; ++i) m *= x;
            val *= m;
        }
        sum += val;
    }
    return sum;
}

}  // namespace peakrisk::poly
