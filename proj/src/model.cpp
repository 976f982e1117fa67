#include "peakrisk/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace peakrisk::model {

bool SemialgebraicSet::contains(const std::vector<double>& x, double tol) const {
    for (const auto& h : constraints)
        if (h.evaluate(x) < -tol) return false;
    return true;
}

namespace {

double max_corner_norm_sq(const std::vector<double>& lo, const std::vector<double>& hi) {
    double r = 0.0;
    for (size_t i = 0; i < lo.size(); ++i)
        r += std::max(lo[i] * lo[i], hi[i] * hi[i]);
    return r;
}

Polynomial ball_polynomial(int arity, double radius_sq) {
    Polynomial b = Polynomial::constant(arity, radius_sq);
    for (int i = 0; i < arity; ++i) {
        Polynomial xi = Polynomial::variable(arity, i);
        b = b - xi * xi;
    }
    return b;
}

}  // namespace

SemialgebraicSet make_box_set(const std::vector<double>& lo, const std::vector<double>& hi) {
    if (lo.empty() || lo.size() != hi.size())
        throw std::invalid_argument("make_box_set: bad box");
    const int n = static_cast<int>(lo.size());
    SemialgebraicSet S;
    S.arity = n;
    S.box_lo = lo;
    S.box_hi = hi;
    for (int i = 0; i < n; ++i) {
        if (hi[i] < lo[i]) throw std::invalid_argument("make_box_set: empty box");
        Polynomial xi = Polynomial::variable(n, i);
        S.constraints.push_back((xi - Polynomial::constant(n, lo[i])) *
                                (Polynomial::constant(n, hi[i]) - xi));
    }
    S.constraints.push_back(ball_polynomial(n, 1.05 * max_corner_norm_sq(lo, hi)));
    S.has_ball_constraint = true;
    return S;
}

SemialgebraicSet make_timebox_set(const SemialgebraicSet& X, double T) {
    if (T <= 0.0) throw std::invalid_argument("make_timebox_set: T must be > 0");
    SemialgebraicSet S;
    S.arity = X.arity + 1;
    Polynomial t = Polynomial::variable(S.arity, 0);
    S.constraints.push_back(t * (Polynomial::constant(S.arity, T) - t));
    for (const auto& h : X.constraints) S.constraints.push_back(h.prepend_variables(1));

    // ball over (t, x); the state-only ball of X does not cover time
    double state_r;
    if (!X.box_lo.empty()) {
        state_r = max_corner_norm_sq(X.box_lo, X.box_hi);
    } else if (X.has_ball_constraint) {
        // radius is the constant term of the ball constraint R - |x|^2
        state_r = X.constraints.back().coeff(MultiIndex(X.arity, 0));
    } else {
        throw std::invalid_argument("make_timebox_set: X needs a box or ball constraint");
    }
    S.constraints.push_back(ball_polynomial(S.arity, 1.05 * (T * T + state_r)));
    S.has_ball_constraint = true;

    if (!X.box_lo.empty()) {
        S.box_lo.push_back(0.0);
        S.box_hi.push_back(T);
        S.box_lo.insert(S.box_lo.end(), X.box_lo.begin(), X.box_lo.end());
        S.box_hi.insert(S.box_hi.end(), X.box_hi.begin(), X.box_hi.end());
    }
    return S;
}

std::pair<double, double> polynomial_range_on_box(const Polynomial& p,
                                                  const std::vector<double>& lo,
                                                  const std::vector<double>& hi) {
    if (lo.size() != hi.size() || static_cast<int>(lo.size()) != p.arity())
        throw std::invalid_argument("polynomial_range_on_box: box/arity mismatch");
    for (size_t i = 0; i < lo.size(); ++i)
        if (hi[i] < lo[i]) throw std::invalid_argument("polynomial_range_on_box: empty box");

    double total_lo = 0.0, total_hi = 0.0;
    for (const auto& [mi, c] : p.terms()) {
        double a = 1.0, b = 1.0;  // interval for the monomial
        for (int v = 0; v < p.arity(); ++v) {
            int e = mi[v];
            if (e == 0) continue;
            double plo, phi;
            if (e % 2 == 0 && lo[v] < 0.0 && hi[v] > 0.0) {
                plo = 0.0;
                phi = std::pow(std::max(-lo[v], hi[v]), e);
            } else {
                plo = std::pow(lo[v], e);
                phi = std::pow(hi[v], e);
                if (plo > phi) std::swap(plo, phi);
            }
            double cand[4] = {a * plo, a * phi, b * plo, b * phi};
            a = *std::min_element(cand, cand + 4);
            b = *std::max_element(cand, cand + 4);
        }
        total_lo += c >= 0 ? c * a : c * b;
        total_hi += c >= 0 ? c * b : c * a;
    }
    return {total_lo, total_hi};
}

double ParameterDistribution::moment(int k) const {
    if (k < 0) throw std::invalid_argument("ParameterDistribution::moment: k < 0");
    if (k > max_order) throw std::runtime_error("ParameterDistribution: moment oracle exhausted");
    switch (kind) {
        case Kind::PointMass:
            return std::pow(p0, k);
        case Kind::Uniform: {
            if (p1 == p0) return std::pow(p0, k);
            return (std::pow(p1, k + 1) - std::pow(p0, k + 1)) / ((k + 1) * (p1 - p0));
        }
        case Kind::Normal: {
            // E[(mu + sigma Z)^k], E[Z^j] = (j-1)!! for even j
            double acc = 0.0;
            for (int j = 0; j <= k; j += 2) {
                double dfact = 1.0;
                for (int i = j - 1; i > 1; i -= 2) dfact *= i;
                acc += static_cast<double>(poly::binomial(k, j)) * std::pow(p0, k - j) *
                       std::pow(p1, j) * dfact;
            }
            return acc;
        }
    }
    throw std::logic_error("ParameterDistribution: unknown kind");
}

double ParameterDistribution::sample(std::mt19937_64& rng) const {
    switch (kind) {
        case Kind::PointMass:
            return p0;
        case Kind::Uniform:
            return std::uniform_real_distribution<double>(p0, p1)(rng);
        case Kind::Normal:
            return p0 + p1 * std::normal_distribution<double>(0.0, 1.0)(rng);
    }
    throw std::logic_error("ParameterDistribution: unknown kind");
}

ParameterDistribution ParameterDistribution::point_mass(double v) {
    return {Kind::PointMass, v, 0.0};
}
ParameterDistribution ParameterDistribution::uniform(double a, double b) {
    return {Kind::Uniform, a, b};
}
ParameterDistribution ParameterDistribution::normal(double mean, double sigma) {
    return {Kind::Normal, mean, sigma};
}

size_t ProcessModel::num_subsystems() const {
    if (const auto* sw = std::get_if<Switched>(&dynamics)) return sw->subsystems.size();
    return 1;
}

void ProcessModel::validate() const {
    if (state_dim < 1) throw std::invalid_argument("ProcessModel: state_dim must be >= 1");
    if (horizon <= 0.0) throw std::invalid_argument("ProcessModel: horizon must be > 0");
    auto check_sde = [this](const ItoSDE& sde) {
        if (static_cast<int>(sde.drift.size()) != state_dim)
            throw std::invalid_argument("ItoSDE: drift size != state_dim");
        for (const auto& f : sde.drift)
            if (f.arity() != state_dim + 1) throw std::invalid_argument("ItoSDE: drift arity");
        for (const auto& col : sde.diffusion_cols) {
            if (static_cast<int>(col.size()) != state_dim)
                throw std::invalid_argument("ItoSDE: diffusion column size != state_dim");
            for (const auto& g : col)
                if (g.arity() != state_dim + 1) throw std::invalid_argument("ItoSDE: diffusion arity");
        }
    };
    auto check_dt = [this](const DiscreteTime& dm) {
        if (dm.dt <= 0.0) throw std::invalid_argument("DiscreteTime: dt must be > 0");
        double steps = horizon / dm.dt;
        if (std::abs(steps - std::round(steps)) > 1e-9)
            throw std::invalid_argument("DiscreteTime: horizon must be a multiple of dt");
        const int want = 1 + state_dim + static_cast<int>(dm.params.size());
        if (static_cast<int>(dm.map.size()) != state_dim)
            throw std::invalid_argument("DiscreteTime: map size != state_dim");
        for (const auto& f : dm.map)
            if (f.arity() != want) throw std::invalid_argument("DiscreteTime: map arity");
    };
    if (const auto* sde = std::get_if<ItoSDE>(&dynamics)) {
        check_sde(*sde);
    } else if (const auto* dm = std::get_if<DiscreteTime>(&dynamics)) {
        check_dt(*dm);
    } else {
        const auto& sw = std::get<Switched>(dynamics);
        if (sw.subsystems.empty()) throw std::invalid_argument("Switched: no subsystems");
        for (const auto& sub : sw.subsystems)
            std::visit([&](const auto& s) {
                if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ItoSDE>) check_sde(s);
                else check_dt(s);
            }, sub);
    }
}

InitialCondition InitialCondition::dirac(std::vector<double> x0) {
    InitialCondition ic;
    ic.kind = Kind::DiracPoint;
    ic.point = std::move(x0);
    return ic;
}

InitialCondition InitialCondition::free_over(SemialgebraicSet X0) {
    InitialCondition ic;
    ic.kind = Kind::FreeOverSet;
    ic.free_set = std::move(X0);
    return ic;
}

Polynomial generator_apply(const ItoSDE& sde, int state_dim, const Polynomial& v) {
    if (v.arity() != state_dim + 1)
        throw std::invalid_argument("generator_apply: v arity must be 1 + state_dim");
    Polynomial out = v.partial_derivative(0);
    std::vector<Polynomial> grad;
    grad.reserve(state_dim);
    for (int i = 0; i < state_dim; ++i) grad.push_back(v.partial_derivative(i + 1));
    for (int i = 0; i < state_dim; ++i) out = out + sde.drift[i] * grad[i];
    for (const auto& g : sde.diffusion_cols) {
        for (int i = 0; i < state_dim; ++i) {
            if (grad[i].is_zero()) continue;
            for (int k = 0; k < state_dim; ++k) {
                Polynomial hess_ik = grad[i].partial_derivative(k + 1);
                if (hess_ik.is_zero()) continue;
                out = out + 0.5 * (g[i] * g[k] * hess_ik);
            }
        }
    }
    return out;
}

Polynomial generator_apply(const DiscreteTime& dm, int state_dim, const Polynomial& v) {
    if (v.arity() != state_dim + 1)
        throw std::invalid_argument("generator_apply: v arity must be 1 + state_dim");
    const int q = static_cast<int>(dm.params.size());
    const int full = 1 + state_dim + q;

    // v(t + dt, f(t, x, lambda)) expanded over (t, x, lambda)
    std::vector<Polynomial> assign;
    assign.push_back(Polynomial::variable(full, 0) + Polynomial::constant(full, dm.dt));
    for (int i = 0; i < state_dim; ++i) assign.push_back(dm.map[i]);
    Polynomial comp = v.substitute(assign);

    // integrate out lambda coordinate-wise via the moment oracles
    Polynomial::TermMap reduced;
    for (const auto& [mi, c] : comp.terms()) {
        double w = c;
        for (int j = 0; j < q; ++j) w *= dm.params[j].moment(mi[1 + state_dim + j]);
        if (w == 0.0) continue;
        MultiIndex tx(mi.begin(), mi.begin() + 1 + state_dim);
        reduced[tx] += w;
    }
    Polynomial expected(1 + state_dim, std::move(reduced));
    return (expected - v) * (1.0 / dm.dt);
}

Polynomial generator_apply(const ProcessModel& m, const Polynomial& v) {
    if (m.is_switched())
        throw std::invalid_argument("generator_apply: switched model has per-subsystem generators");
    if (const auto* sde = std::get_if<ItoSDE>(&m.dynamics)) return generator_apply(*sde, m.state_dim, v);
    return generator_apply(std::get<DiscreteTime>(m.dynamics), m.state_dim, v);
}

int generator_degree_bound(const ProcessModel& m, int probe_degree) {
    if (probe_degree < 0) throw std::invalid_argument("generator_degree_bound: negative degree");
    std::vector<std::variant<ItoSDE, DiscreteTime>> gens;
    if (const auto* sw = std::get_if<Switched>(&m.dynamics)) {
        gens = sw->subsystems;
    } else if (const auto* sde = std::get_if<ItoSDE>(&m.dynamics)) {
        gens.push_back(*sde);
    } else {
        gens.push_back(std::get<DiscreteTime>(m.dynamics));
    }

    int max_deg = 0;
    for (const auto& mi : poly::basis_monomials(m.state_dim + 1, probe_degree)) {
        Polynomial mono = Polynomial::monomial(mi, 1.0);
        for (const auto& gen : gens) {
            Polynomial lv = std::visit(
                [&](const auto& g) { return generator_apply(g, m.state_dim, mono); }, gen);
            if (!lv.is_zero()) max_deg = std::max(max_deg, lv.degree());
        }
    }
    return (max_deg + 1) / 2;
}

}  // namespace peakrisk::model
