#include "peakrisk/problem_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace peakrisk::io {
namespace {

using json = nlohmann::json;
using model::DiscreteTime;
using model::InitialCondition;
using model::ItoSDE;
using model::ParameterDistribution;
using model::ProcessModel;
using model::SemialgebraicSet;
using model::Switched;
using poly::MultiIndex;
using poly::Polynomial;

[[noreturn]] void fail(const std::string& what) { throw SchemaError(what); }

const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing field '") + key + "'");
    return *it;
}

// A polynomial is a list of terms: [{"coeff": c, "exps": [e0, e1, ...]}].
Polynomial parse_poly(const json& j, int arity, const char* what) {
    if (!j.is_array()) fail(std::string(what) + ": expected a term array");
    Polynomial p = Polynomial::zero(arity);
    for (const auto& term : j) {
        const auto& exps = field(term, "exps");
        if (static_cast<int>(exps.size()) != arity)
            fail(std::string(what) + ": term arity " +
                 std::to_string(exps.size()) + ", expected " +
                 std::to_string(arity));
        MultiIndex mi;
        for (const auto& e : exps) {
            if (!e.is_number_integer() || e.get<int>() < 0)
                fail(std::string(what) + ": exponents must be nonnegative integers");
            mi.push_back(e.get<int>());
        }
        p = p + Polynomial::monomial(mi, field(term, "coeff").get<double>());
    }
    return p;
}

json poly_to_json(const Polynomial& p) {
    json terms = json::array();
    for (const auto& [mi, c] : p.terms())
        terms.push_back({{"coeff", c}, {"exps", mi}});
    return terms;
}

ParameterDistribution parse_param(const json& j) {
    const auto kind = field(j, "kind").get<std::string>();
    if (kind == "point") return ParameterDistribution::point_mass(field(j, "a").get<double>());
    if (kind == "uniform")
        return ParameterDistribution::uniform(field(j, "a").get<double>(),
                                              field(j, "b").get<double>());
    if (kind == "normal")
        return ParameterDistribution::normal(field(j, "a").get<double>(),
                                             field(j, "b").get<double>());
    fail("unknown parameter distribution '" + kind + "'");
}

json param_to_json(const ParameterDistribution& d) {
    switch (d.kind) {
        case ParameterDistribution::Kind::PointMass:
            return {{"kind", "point"}, {"a", d.p0}};
        case ParameterDistribution::Kind::Uniform:
            return {{"kind", "uniform"}, {"a", d.p0}, {"b", d.p1}};
        case ParameterDistribution::Kind::Normal:
            return {{"kind", "normal"}, {"a", d.p0}, {"b", d.p1}};
    }
    fail("unserializable parameter distribution");
}

ItoSDE parse_sde(const json& j, int n) {
    ItoSDE sde;
    const auto& drift = field(j, "drift");
    if (static_cast<int>(drift.size()) != n) fail("drift: expected one polynomial per state");
    for (const auto& f : drift) sde.drift.push_back(parse_poly(f, n + 1, "drift"));
    for (const auto& col : field(j, "diffusion")) {
        if (static_cast<int>(col.size()) != n)
            fail("diffusion: expected one polynomial per state in each column");
        std::vector<Polynomial> g;
        for (const auto& gi : col) g.push_back(parse_poly(gi, n + 1, "diffusion"));
        sde.diffusion_cols.push_back(std::move(g));
    }
    return sde;
}

DiscreteTime parse_discrete(const json& j, int n) {
    DiscreteTime dm;
    dm.dt = field(j, "dt").get<double>();
    if (auto it = j.find("params"); it != j.end())
        for (const auto& pj : *it) dm.params.push_back(parse_param(pj));
    const int arity = 1 + n + static_cast<int>(dm.params.size());
    const auto& map = field(j, "map");
    if (static_cast<int>(map.size()) != n) fail("map: expected one polynomial per state");
    for (const auto& f : map) dm.map.push_back(parse_poly(f, arity, "map"));
    return dm;
}

json sde_to_json(const ItoSDE& sde) {
    json j;
    j["kind"] = "sde";
    for (const auto& f : sde.drift) j["drift"].push_back(poly_to_json(f));
    j["diffusion"] = json::array();
    for (const auto& col : sde.diffusion_cols) {
        json c = json::array();
        for (const auto& g : col) c.push_back(poly_to_json(g));
        j["diffusion"].push_back(c);
    }
    return j;
}

json discrete_to_json(const DiscreteTime& dm) {
    json j;
    j["kind"] = "discrete";
    j["dt"] = dm.dt;
    for (const auto& f : dm.map) j["map"].push_back(poly_to_json(f));
    if (!dm.params.empty())
        for (const auto& d : dm.params) j["params"].push_back(param_to_json(d));
    return j;
}

SemialgebraicSet parse_set(const json& j, const char* what) {
    const auto& box = field(j, "box");
    std::vector<double> lo = field(box, "lo").get<std::vector<double>>();
    std::vector<double> hi = field(box, "hi").get<std::vector<double>>();
    if (lo.size() != hi.size() || lo.empty())
        fail(std::string(what) + ": box lo/hi must be nonempty and equal length");
    const int n = static_cast<int>(lo.size());
    if (auto it = j.find("constraints"); it != j.end()) {
        // explicit constraints define the set; the box is advisory
        SemialgebraicSet S;
        S.arity = n;
        S.box_lo = lo;
        S.box_hi = hi;
        for (const auto& h : *it)
            S.constraints.push_back(parse_poly(h, n, what));
        S.has_ball_constraint = j.value("has_ball", false);
        return S;
    }
    return model::make_box_set(lo, hi);
}

json set_to_json(const SemialgebraicSet& S, bool box_only) {
    json j;
    j["box"] = {{"lo", S.box_lo}, {"hi", S.box_hi}};
    if (!box_only) {
        j["constraints"] = json::array();
        for (const auto& h : S.constraints) j["constraints"].push_back(poly_to_json(h));
        j["has_ball"] = S.has_ball_constraint;
    }
    return j;
}

InitialCondition parse_initial(const json& j, int n) {
    if (auto it = j.find("point"); it != j.end()) {
        auto x0 = it->get<std::vector<double>>();
        if (static_cast<int>(x0.size()) != n) fail("initial point has the wrong dimension");
        return InitialCondition::dirac(std::move(x0));
    }
    if (auto it = j.find("moments"); it != j.end()) {
        InitialCondition init;
        init.kind = InitialCondition::Kind::GivenMoments;
        for (const auto& mj : *it) {
            MultiIndex mi = field(mj, "exps").get<std::vector<int>>();
            if (static_cast<int>(mi.size()) != n) fail("initial moment has the wrong arity");
            init.given_moments[mi] = field(mj, "value").get<double>();
        }
        return init;
    }
    if (auto it = j.find("free_set"); it != j.end())
        return InitialCondition::free_over(parse_set(*it, "initial free_set"));
    fail("initial: expected 'point', 'moments', or 'free_set'");
}

json initial_to_json(const InitialCondition& init) {
    json j;
    switch (init.kind) {
        case InitialCondition::Kind::DiracPoint:
            j["point"] = init.point;
            break;
        case InitialCondition::Kind::GivenMoments:
            j["moments"] = json::array();
            for (const auto& [mi, v] : init.given_moments)
                j["moments"].push_back({{"exps", mi}, {"value", v}});
            break;
        case InitialCondition::Kind::FreeOverSet:
            j["free_set"] = set_to_json(init.free_set, false);
            break;
        default:
            fail("unserializable initial condition kind");
    }
    return j;
}

}  // namespace

Problem parse_problem(const nlohmann::json& doc) {
    try {
        Problem p;
        const int n = field(doc, "state_dim").get<int>();
        if (n < 1) fail("state_dim must be positive");
        p.process.state_dim = n;
        p.process.horizon = field(doc, "horizon").get<double>();
        if (p.process.horizon <= 0) fail("horizon must be positive");

        const auto& mj = field(doc, "model");
        const auto kind = field(mj, "kind").get<std::string>();
        if (kind == "sde") {
            p.process.dynamics = parse_sde(mj, n);
        } else if (kind == "discrete") {
            p.process.dynamics = parse_discrete(mj, n);
        } else if (kind == "switched") {
            Switched sw;
            for (const auto& sj : field(mj, "subsystems")) {
                const auto sk = field(sj, "kind").get<std::string>();
                if (sk == "sde")
                    sw.subsystems.emplace_back(parse_sde(sj, n));
                else if (sk == "discrete")
                    sw.subsystems.emplace_back(parse_discrete(sj, n));
                else
                    fail("unknown subsystem kind '" + sk + "'");
            }
            if (sw.subsystems.empty()) fail("switched model needs subsystems");
            p.process.dynamics = std::move(sw);
        } else {
            fail("unknown model kind '" + kind + "'");
        }

        const auto& box = field(doc, "state_box");
        p.X = model::make_box_set(field(box, "lo").get<std::vector<double>>(),
                                  field(box, "hi").get<std::vector<double>>());
        if (p.X.arity != n) fail("state_box dimension does not match state_dim");
        if (auto it = doc.find("extra_set_constraints"); it != doc.end())
            for (const auto& h : *it)
                p.X.constraints.push_back(parse_poly(h, n, "extra_set_constraints"));

        p.init = parse_initial(field(doc, "initial"), n);
        p.objective = parse_poly(field(doc, "objective"), n, "objective");
        p.unimodal = doc.value("unimodal", false);

        if (auto it = doc.find("unsafe_set"); it != doc.end()) {
            p.unsafe_set = parse_set(*it, "unsafe_set");
            p.metric = parse_poly(field(doc, "metric"), n + p.unsafe_set->arity,
                                  "metric");
        }
        p.process.validate();
        return p;
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("malformed problem file: ") + e.what());
    }
}

Problem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open problem file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    return parse_problem(doc);
}

nlohmann::json problem_to_json(const Problem& p) {
    json doc;
    const int n = p.process.state_dim;
    doc["state_dim"] = n;
    doc["horizon"] = p.process.horizon;
    if (const auto* sde = std::get_if<ItoSDE>(&p.process.dynamics)) {
        doc["model"] = sde_to_json(*sde);
    } else if (const auto* dm = std::get_if<DiscreteTime>(&p.process.dynamics)) {
        doc["model"] = discrete_to_json(*dm);
    } else {
        json sw;
        sw["kind"] = "switched";
        sw["subsystems"] = json::array();
        for (const auto& sub : std::get<Switched>(p.process.dynamics).subsystems) {
            if (const auto* s = std::get_if<ItoSDE>(&sub))
                sw["subsystems"].push_back(sde_to_json(*s));
            else
                sw["subsystems"].push_back(
                    discrete_to_json(std::get<DiscreteTime>(sub)));
        }
        doc["model"] = std::move(sw);
    }
    doc["state_box"] = {{"lo", p.X.box_lo}, {"hi", p.X.box_hi}};
    // constraints beyond the box-generated ones (n quadratics + ball)
    if (static_cast<int>(p.X.constraints.size()) > n + 1) {
        doc["extra_set_constraints"] = json::array();
        for (size_t k = n + 1; k < p.X.constraints.size(); ++k)
            doc["extra_set_constraints"].push_back(poly_to_json(p.X.constraints[k]));
    }
    doc["initial"] = initial_to_json(p.init);
    doc["objective"] = poly_to_json(p.objective);
    doc["unimodal"] = p.unimodal;
    if (p.unsafe_set) {
        doc["unsafe_set"] = set_to_json(*p.unsafe_set, false);
        doc["metric"] = poly_to_json(*p.metric);
    }
    return doc;
}

namespace {

Polynomial make_poly(int arity,
                     std::initializer_list<std::pair<std::vector<int>, double>> terms) {
    Polynomial out = Polynomial::zero(arity);
    for (const auto& [e, c] : terms) out = out + Polynomial::monomial(MultiIndex(e), c);
    return out;
}

}  // namespace

std::map<std::string, Problem> builtin_examples() {
    std::map<std::string, Problem> out;

    {
        // damped Duffing-type oscillator with additive noise
        Problem p;
        p.process.state_dim = 2;
        p.process.horizon = 5.0;
        ItoSDE sde;
        sde.drift = {make_poly(3, {{{0, 0, 1}, 1.0}}),
                     make_poly(3, {{{0, 1, 0}, -1.0}, {{0, 0, 1}, -1.0}, {{0, 3, 0}, -0.5}})};
        sde.diffusion_cols = {{Polynomial::zero(3), make_poly(3, {{{0, 0, 0}, 0.1}})}};
        p.process.dynamics = sde;
        p.X = model::make_box_set({-1.0, -1.0}, {2.0, 1.5});
        p.init = InitialCondition::dirac({1.0, 1.0});
        p.objective = make_poly(2, {{{0, 1}, -1.0}});
        p.unimodal = true;
        out["flow"] = std::move(p);
    }

    {
        // three-state twist system with cubic cross terms
        Problem p;
        p.process.state_dim = 3;
        p.process.horizon = 5.0;
        ItoSDE sde;
        sde.drift = {
            make_poly(4, {{{0, 1, 0, 0}, -2.5}, {{0, 0, 1, 0}, 1.0}, {{0, 0, 0, 1}, -0.5},
                          {{0, 3, 0, 0}, 2.0}, {{0, 0, 0, 3}, 2.0}}),
            make_poly(4, {{{0, 1, 0, 0}, -1.0}, {{0, 0, 1, 0}, 1.5}, {{0, 0, 0, 1}, 0.5},
                          {{0, 0, 3, 0}, -2.0}, {{0, 0, 0, 3}, -2.0}}),
            make_poly(4, {{{0, 1, 0, 0}, 1.5}, {{0, 0, 1, 0}, 2.5}, {{0, 0, 0, 1}, -2.0},
                          {{0, 3, 0, 0}, -2.0}, {{0, 0, 3, 0}, -2.0}})};
        sde.diffusion_cols = {{Polynomial::zero(4), Polynomial::zero(4),
                               make_poly(4, {{{0, 0, 0, 0}, 0.1}})}};
        p.process.dynamics = sde;
        p.X = model::make_box_set({-0.6, -1.0, -1.0}, {0.6, 1.0, 1.5});
        p.init = InitialCondition::dirac({0.5, 0.0, 0.0});
        p.objective = make_poly(3, {{{0, 0, 1}, 1.0}});
        p.unimodal = true;
        out["twist"] = std::move(p);
    }

    {
        // discrete-time quadratic map with a unit-normal parameter per step
        Problem p;
        p.process.state_dim = 2;
        p.process.horizon = 1.0;
        DiscreteTime dm;
        dm.dt = 0.1;
        dm.params = {ParameterDistribution::normal(0.0, 1.0)};
        dm.map = {make_poly(4, {{{0, 1, 0, 0}, -0.3}, {{0, 0, 1, 0}, 0.8},
                                {{0, 1, 1, 1}, 0.25}}),
                  make_poly(4, {{{0, 1, 0, 0}, -0.9}, {{0, 0, 1, 0}, -0.1},
                                {{0, 2, 0, 0}, -0.2}, {{0, 0, 0, 1}, 0.025}})};
        p.process.dynamics = dm;
        p.X = model::make_box_set({-1.5, -1.5}, {1.5, 1.5});
        p.init = InitialCondition::dirac({-1.0, 0.5});
        p.objective = make_poly(2, {{{0, 1}, -1.0}});
        p.unimodal = true;
        out["discrete"] = std::move(p);
    }

    {
        // two linear subsystems under arbitrary switching, multiplicative noise
        Problem p;
        p.process.state_dim = 2;
        p.process.horizon = 5.0;
        ItoSDE a, b;
        a.drift = {make_poly(3, {{{0, 1, 0}, -2.5}, {{0, 0, 1}, -2.0}}),
                   make_poly(3, {{{0, 1, 0}, -0.5}, {{0, 0, 1}, -1.0}})};
        a.diffusion_cols = {{Polynomial::zero(3), make_poly(3, {{{0, 0, 1}, 0.25}})}};
        b.drift = {make_poly(3, {{{0, 1, 0}, -1.0}, {{0, 0, 1}, -2.0}}),
                   make_poly(3, {{{0, 1, 0}, 2.5}, {{0, 0, 1}, -1.0}})};
        b.diffusion_cols = a.diffusion_cols;
        Switched sw;
        sw.subsystems = {a, b};
        p.process.dynamics = std::move(sw);
        p.X = model::make_box_set({-2.0, -2.0}, {2.0, 2.0});
        p.init = InitialCondition::dirac({0.0, 1.0});
        p.objective = make_poly(2, {{{0, 1}, -1.0}});
        p.unimodal = true;
        out["switched"] = std::move(p);
    }

    {
        // linear flow kept away from a half-disk unsafe set; squared-distance metric
        Problem p;
        p.process.state_dim = 2;
        p.process.horizon = 5.0;
        ItoSDE sde;
        sde.drift = {make_poly(3, {{{0, 1, 0}, -1.0}, {{0, 0, 1}, -2.0}}),
                     make_poly(3, {{{0, 1, 0}, 2.5}, {{0, 0, 1}, -1.0}})};
        sde.diffusion_cols = {{Polynomial::zero(3), make_poly(3, {{{0, 0, 0}, 0.1}})}};
        p.process.dynamics = sde;
        p.X = model::make_box_set({-1.25, -1.0}, {1.0, 1.0});
        p.init = InitialCondition::dirac({0.0, 0.75});
        p.objective = Polynomial::zero(2);  // distance kinds use the metric
        p.unimodal = true;
        SemialgebraicSet Xu;
        Xu.arity = 2;
        Xu.box_lo = {-1.1, -1.1};
        Xu.box_hi = {-0.9, -0.9};
        // 0.1^2 >= (u1 + 1)^2 + (u2 + 1)^2  and  u1 + u2 <= -2
        Xu.constraints = {
            make_poly(2, {{{0, 0}, -1.99}, {{1, 0}, -2.0}, {{2, 0}, -1.0},
                          {{0, 1}, -2.0}, {{0, 2}, -1.0}}),
            make_poly(2, {{{0, 0}, -2.0}, {{1, 0}, -1.0}, {{0, 1}, -1.0}})};
        p.unsafe_set = std::move(Xu);
        p.metric = make_poly(4, {{{2, 0, 0, 0}, 1.0}, {{1, 0, 1, 0}, -2.0},
                                 {{0, 0, 2, 0}, 1.0}, {{0, 2, 0, 0}, 1.0},
                                 {{0, 1, 0, 1}, -2.0}, {{0, 0, 0, 2}, 1.0}});
        out["distance"] = std::move(p);
    }

    return out;
}

assemble::BoundSpec to_bound_spec(const Problem& p, assemble::BoundKind kind,
                                  double eps, int order) {
    assemble::BoundSpec spec;
    spec.process = p.process;
    spec.X = p.X;
    spec.init = p.init;
    spec.p = p.objective;
    spec.kind = kind;
    spec.eps = eps;
    spec.order = order;
    spec.unimodal = p.unimodal;
    if (kind == assemble::BoundKind::DistanceES ||
        kind == assemble::BoundKind::DistanceTail) {
        if (!p.unsafe_set || !p.metric)
            throw SchemaError("distance bounds need 'unsafe_set' and 'metric'");
        spec.X_u = *p.unsafe_set;
        spec.metric = *p.metric;
    }
    return spec;
}

}  // namespace peakrisk::io
