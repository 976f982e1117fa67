#include "peakrisk/assemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>

namespace peakrisk::assemble {

using conic::ConeType;
using model::DiscreteTime;
using model::ItoSDE;
using model::Switched;
using moments::LinExpr;
using moments::MomentBasis;

namespace {

Polynomial lift_time(const Polynomial& p) { return p.prepend_variables(1); }

// product set A x B over stacked coordinates
SemialgebraicSet product_set(const SemialgebraicSet& A, const SemialgebraicSet& B) {
    SemialgebraicSet out;
    out.arity = A.arity + B.arity;
    for (const auto& h : A.constraints) out.constraints.push_back(h.append_variables(B.arity));
    for (const auto& h : B.constraints) out.constraints.push_back(h.prepend_variables(A.arity));
    out.has_ball_constraint = A.has_ball_constraint && B.has_ball_constraint;
    if (!A.box_lo.empty() && !B.box_lo.empty()) {
        out.box_lo = A.box_lo;
        out.box_lo.insert(out.box_lo.end(), B.box_lo.begin(), B.box_lo.end());
        out.box_hi = A.box_hi;
        out.box_hi.insert(out.box_hi.end(), B.box_hi.begin(), B.box_hi.end());
    }
    return out;
}

// The relaxations are assembled under the unit-time normalization s = t/T,
// in which both drift and noise coefficients pick up a factor of T:
//   dx = T f ds + T g dW(s).
// Mapped back to the original clock this leaves the drift untouched and
// multiplies the diffusion half of the generator by T, i.e. the noise
// columns by sqrt(T). Discrete-time maps are unaffected.
ItoSDE horizon_normalized(ItoSDE sde, double T) {
    const double s = std::sqrt(T);
    for (auto& col : sde.diffusion_cols)
        for (auto& gi : col) gi = gi * s;
    return sde;
}

std::vector<std::variant<ItoSDE, DiscreteTime>> subsystems_of(const ProcessModel& m) {
    std::vector<std::variant<ItoSDE, DiscreteTime>> subs;
    if (m.is_switched())
        subs = std::get<Switched>(m.dynamics).subsystems;
    else if (std::holds_alternative<ItoSDE>(m.dynamics))
        subs = {std::get<ItoSDE>(m.dynamics)};
    else
        subs = {std::get<DiscreteTime>(m.dynamics)};
    for (auto& sub : subs)
        if (auto* sde = std::get_if<ItoSDE>(&sub)) *sde = horizon_normalized(*sde, m.horizon);
    return subs;
}

Polynomial apply_subgenerator(const std::variant<ItoSDE, DiscreteTime>& sub, int n,
                              const Polynomial& v) {
    return std::visit([&](const auto& s) { return model::generator_apply(s, n, v); }, sub);
}

// interval for the scalar pushforward measures, from the advisory boxes
std::pair<double, double> objective_interval(const Polynomial& p, const SemialgebraicSet& S) {
    if (S.box_lo.empty())
        throw std::invalid_argument("shortfall relaxation needs a bounding box on the state set");
    return model::polynomial_range_on_box(p, S.box_lo, S.box_hi);
}

struct BuildCtx {
    AssembledProgram out;
    // deferred PSD blocks: (measure offset, localizer spec)
    struct PsdJob {
        int offset;
        moments::LocalizerSpec spec;
    };
    std::vector<PsdJob> psd_jobs;

    int add_measure(const std::string& name, const MomentBasis& basis,
                    const SemialgebraicSet& support, int loc_order) {
        const int offset = out.program.add_vars(basis.size());
        out.measures.push_back({name, offset, basis.arity(), basis.max_degree(), basis.size()});
        psd_jobs.push_back({offset, moments::localizer(basis, Polynomial::constant(basis.arity(), 1.0), loc_order)});
        for (const auto& h : support.constraints)
            psd_jobs.push_back({offset, moments::localizer(basis, h, loc_order)});
        return offset;
    }

    void emit_psd_blocks() {
        for (const auto& job : psd_jobs) {
            const int first = out.program.add_block(ConeType::PSD, job.spec.side);
            size_t pos = 0;
            for (int j = 0; j < job.spec.side; ++j) {
                for (int i = 0; i <= j; ++i, ++pos) {
                    const double scale = (i == j) ? 1.0 : std::sqrt(2.0);
                    const int row = first + j * (j + 1) / 2 + i;
                    for (const auto& t : job.spec.entries[pos].terms)
                        out.program.add_entry(row, job.offset + t.index, -scale * t.coeff);
                }
            }
        }
        psd_jobs.clear();
    }
};

}  // namespace

const char* kind_name(BoundKind k) {
    switch (k) {
        case BoundKind::Mean: return "mean";
        case BoundKind::Cantelli: return "cantelli";
        case BoundKind::VP: return "vp";
        case BoundKind::ES: return "es";
        case BoundKind::DistanceES: return "distance-es";
        case BoundKind::DistanceTail: return "distance-tail";
    }
    return "unknown";
}

void BoundSpec::validate() const {
    process.validate();
    const int n = process.state_dim;
    if (X.arity != n) throw std::invalid_argument("state set arity does not match the model");
    const bool distance = kind == BoundKind::DistanceES || kind == BoundKind::DistanceTail;
    if (!distance && p.arity() != n)
        throw std::invalid_argument("state function arity does not match the model");
    if (order < 1) throw std::invalid_argument("relaxation order must be >= 1");
    const bool needs_eps = kind != BoundKind::Mean;
    if (needs_eps && !(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("risk level must lie in (0, 1)");
    if (kind == BoundKind::VP && !unimodal)
        throw std::invalid_argument("the unimodal tail bound requires the unimodality assertion");
    if (distance) {
        if (X_u.arity < 1 || X_u.constraints.empty())
            throw std::invalid_argument("distance bounds need a nonempty unsafe set");
        if (metric.arity() != n + X_u.arity)
            throw std::invalid_argument("metric arity must be state dim + unsafe-set dim");
    }
    if (init.kind == InitialCondition::Kind::DiracPoint ||
        init.kind == InitialCondition::Kind::PointWithFree) {
        if (static_cast<int>(init.point.size()) != n)
            throw std::invalid_argument("initial point dimension mismatch");
        if (init.kind == InitialCondition::Kind::DiracPoint && !X.contains(init.point, 1e-7))
            throw std::invalid_argument("initial point lies outside the state set");
    }
}

const MeasureLayout& AssembledProgram::layout(const std::string& name) const {
    for (const auto& m : measures)
        if (m.name == name) return m;
    throw std::out_of_range("no measure named " + name);
}

namespace {

// turns a DistanceTail spec into the augmented tail spec over (x, x_u) with
// frozen extra states and objective -metric
BoundSpec augment_for_distance_tail(const BoundSpec& spec) {
    const int n = spec.process.state_dim;
    const int nu = spec.X_u.arity;
    BoundSpec aug;
    aug.order = spec.order;
    aug.eps = spec.eps;
    aug.unimodal = spec.unimodal;
    aug.soc_as_psd = spec.soc_as_psd;
    // eps = 1/2 degenerates to the expectation bound; the unimodal
    // refinement applies only in its validity range
    aug.kind = spec.eps >= 0.5 ? BoundKind::Mean
               : (spec.unimodal && spec.eps <= 1.0 / 6.0) ? BoundKind::VP
                                                          : BoundKind::Cantelli;

    aug.process.state_dim = n + nu;
    aug.process.horizon = spec.process.horizon;
    auto augment_sub = [&](const std::variant<ItoSDE, DiscreteTime>& sub)
        -> std::variant<ItoSDE, DiscreteTime> {
        if (std::holds_alternative<ItoSDE>(sub)) {
            const auto& sde = std::get<ItoSDE>(sub);
            ItoSDE a;
            for (const auto& f : sde.drift) a.drift.push_back(f.append_variables(nu));
            for (int k = 0; k < nu; ++k) a.drift.push_back(Polynomial::zero(1 + n + nu));
            for (const auto& col : sde.diffusion_cols) {
                std::vector<Polynomial> c;
                for (const auto& g : col) c.push_back(g.append_variables(nu));
                for (int k = 0; k < nu; ++k) c.push_back(Polynomial::zero(1 + n + nu));
                a.diffusion_cols.push_back(std::move(c));
            }
            return a;
        }
        const auto& dm = std::get<DiscreteTime>(sub);
        const int np = static_cast<int>(dm.params.size());
        // old vars (t, x, lambda) -> new vars (t, x, x_u, lambda)
        std::vector<Polynomial> assign;
        for (int i = 0; i <= n; ++i) assign.push_back(Polynomial::variable(1 + n + nu + np, i));
        for (int j = 0; j < np; ++j)
            assign.push_back(Polynomial::variable(1 + n + nu + np, 1 + n + nu + j));
        DiscreteTime a;
        a.dt = dm.dt;
        a.params = dm.params;
        for (const auto& f : dm.map) a.map.push_back(f.substitute(assign));
        for (int k = 0; k < nu; ++k)
            a.map.push_back(Polynomial::variable(1 + n + nu + np, 1 + n + k));
        return a;
    };
    if (spec.process.is_switched()) {
        Switched sw;
        for (const auto& sub : std::get<Switched>(spec.process.dynamics).subsystems)
            sw.subsystems.push_back(augment_sub(sub));
        aug.process.dynamics = sw;
    } else {
        auto a = std::holds_alternative<ItoSDE>(spec.process.dynamics)
                     ? augment_sub(std::get<ItoSDE>(spec.process.dynamics))
                     : augment_sub(std::get<DiscreteTime>(spec.process.dynamics));
        if (std::holds_alternative<ItoSDE>(a)) aug.process.dynamics = std::get<ItoSDE>(a);
        else aug.process.dynamics = std::get<DiscreteTime>(a);
    }
    aug.X = product_set(spec.X, spec.X_u);
    aug.p = -spec.metric;
    if (spec.init.kind != InitialCondition::Kind::DiracPoint)
        throw std::invalid_argument("distance tail bounds support point initial conditions only");
    aug.init.kind = InitialCondition::Kind::PointWithFree;
    aug.init.point = spec.init.point;
    aug.init.free_set = spec.X_u;
    return aug;
}

AssembledProgram build_core(const BoundSpec& spec) {
    const int n = spec.process.state_dim;
    const int d = spec.order;
    const double T = spec.process.horizon;
    const bool is_es = spec.kind == BoundKind::ES || spec.kind == BoundKind::DistanceES;
    const bool is_tail = spec.kind == BoundKind::Cantelli || spec.kind == BoundKind::VP;
    const bool is_distance_es = spec.kind == BoundKind::DistanceES;

    const Polynomial& scalar_fn = is_distance_es ? spec.metric : spec.p;
    if (is_tail && 2 * scalar_fn.degree() > 2 * d)
        throw std::invalid_argument("state function squared exceeds the relaxation degree");
    if (!is_tail && scalar_fn.degree() > 2 * d)
        throw std::invalid_argument("state function exceeds the relaxation degree");

    BuildCtx ctx;
    auto& prog = ctx.out.program;

    const auto timebox = model::make_timebox_set(spec.X, T);
    const MomentBasis stop_basis(n + 1, 2 * d);
    const int stop_off = ctx.add_measure("stopping", stop_basis, timebox, d);

    // order of the occupation moments: images of all stopping test
    // monomials under the generator must be expressible
    const int occ_order = model::generator_degree_bound(spec.process, 2 * d);
    const MomentBasis occ_basis(n + 1, 2 * occ_order);
    const auto subs = subsystems_of(spec.process);
    std::vector<int> occ_offs;
    for (size_t l = 0; l < subs.size(); ++l) {
        const std::string name =
            subs.size() == 1 ? "occupation" : "occupation_" + std::to_string(l + 1);
        occ_offs.push_back(ctx.add_measure(name, occ_basis, timebox, occ_order));
    }

    int init_off = -1;
    const MomentBasis init_basis(std::max(1, spec.init.free_set.arity), 2 * d);
    if (spec.init.kind == InitialCondition::Kind::FreeOverSet ||
        spec.init.kind == InitialCondition::Kind::PointWithFree) {
        if (spec.init.free_set.arity < 1)
            throw std::invalid_argument("free initial condition needs a support set");
        init_off = ctx.add_measure("initial", init_basis, spec.init.free_set, d);
    }

    // joint measure over (x, x_u) for the marginal-matched distance program
    int joint_off = -1;
    int nu = 0;
    MomentBasis joint_basis(1, 0);
    if (is_distance_es) {
        nu = spec.X_u.arity;
        joint_basis = MomentBasis(n + nu, 2 * d);
        joint_off = ctx.add_measure("joint", joint_basis, product_set(spec.X, spec.X_u), d);
    }

    // scalar shortfall measures
    int n_off = -1, nhat_off = -1, delta = 0;
    MomentBasis scalar_basis(1, 0);
    if (is_es) {
        const int degp = std::max(1, scalar_fn.degree());
        // The shortfall moments are matched one degree short of the cap
        // 2*delta*deg(p) <= 2d imposed by the stopping-measure basis; the
        // last matched power is the least reliable pseudomoment and pinning
        // it tightens the bound past the measure program's value.
        delta = std::max(1, std::min(d / degp - 1, d / (2 * degp) + 1));
        if (d / degp < 1)
            throw std::invalid_argument("state function degree exceeds the relaxation order");
        auto [lo, hi] = is_distance_es
                            ? objective_interval(scalar_fn, product_set(spec.X, spec.X_u))
                            : objective_interval(scalar_fn, spec.X);
        // Support the shortfall measures on a 25% inflation of the exact
        // range: the quantile variable must be free to sit above the
        // attainable maximum when the tail constraint is slack.
        lo *= 1.25;
        hi *= 1.25;
        ctx.out.p_lo = lo;
        ctx.out.p_hi = hi;
        scalar_basis = MomentBasis(1, 2 * delta);
        const auto s = Polynomial::variable(1, 0);
        const auto interval = (s - Polynomial::constant(1, lo)) * (Polynomial::constant(1, hi) - s);
        SemialgebraicSet seg;
        seg.arity = 1;
        seg.constraints = {interval};
        n_off = ctx.add_measure("shortfall", scalar_basis, seg, delta);
        nhat_off = ctx.add_measure("shortfall_slack", scalar_basis, seg, delta);
    }

    int c_var = -1;
    double r = 0.0;
    if (is_tail) {
        r = risk::tail_constant(spec.eps,
                                spec.kind == BoundKind::VP ? risk::TailKind::VysochanskijPetunin
                                                           : risk::TailKind::Cantelli);
        c_var = prog.add_vars(1);
    }

    // ---- equality rows ----
    // dynamics: one row per (t, x) monomial of degree <= 2d
    const auto& dyn_monos = stop_basis.monomials();
    ctx.out.dynamics_row_start = prog.add_block(ConeType::Zero, static_cast<int>(dyn_monos.size()));
    ctx.out.dynamics_monomials = dyn_monos;
    for (size_t r_i = 0; r_i < dyn_monos.size(); ++r_i) {
        const int row = ctx.out.dynamics_row_start + static_cast<int>(r_i);
        const auto& mono = dyn_monos[r_i];
        prog.add_entry(row, stop_off + static_cast<int>(r_i), 1.0);
        const Polynomial test = Polynomial::monomial(mono, 1.0);
        for (size_t l = 0; l < subs.size(); ++l) {
            const LinExpr le = occ_basis.riesz(apply_subgenerator(subs[l], n, test));
            for (const auto& t : le.terms) prog.add_entry(row, occ_offs[l] + t.index, -t.coeff);
        }
        const bool time_free = mono[0] == 0;  // no time power: initial term present
        if (!time_free) continue;
        MultiIndex alpha(mono.begin() + 1, mono.end());
        switch (spec.init.kind) {
            case InitialCondition::Kind::DiracPoint: {
                double v = 1.0;
                for (int k = 0; k < n; ++k) v *= std::pow(spec.init.point[k], alpha[k]);
                prog.set_rhs(row, v);
                break;
            }
            case InitialCondition::Kind::GivenMoments: {
                auto it = spec.init.given_moments.find(alpha);
                if (it == spec.init.given_moments.end())
                    throw std::invalid_argument("initial moments missing a required entry");
                prog.set_rhs(row, it->second);
                break;
            }
            case InitialCondition::Kind::FreeOverSet:
                prog.add_entry(row, init_off + init_basis.index_of(alpha), -1.0);
                break;
            case InitialCondition::Kind::PointWithFree: {
                const int nf = spec.init.free_set.arity;
                const int nx = n - nf;  // leading point coordinates
                double v = 1.0;
                for (int k = 0; k < nx; ++k) v *= std::pow(spec.init.point[k], alpha[k]);
                MultiIndex au(alpha.begin() + nx, alpha.end());
                prog.add_entry(row, init_off + init_basis.index_of(au), -v);
                break;
            }
        }
    }

    // free initial measure mass
    if (init_off >= 0) {
        const int row = prog.add_block(ConeType::Zero, 1);
        prog.add_entry(row, init_off + 0, 1.0);
        prog.set_rhs(row, 1.0);
    }

    // x-marginal match between the stopping measure and the joint measure
    if (is_distance_es) {
        const auto xmonos = poly::basis_monomials(n, 2 * d);
        const int first = prog.add_block(ConeType::Zero, static_cast<int>(xmonos.size()));
        for (size_t i = 0; i < xmonos.size(); ++i) {
            MultiIndex tx(n + 1, 0);
            std::copy(xmonos[i].begin(), xmonos[i].end(), tx.begin() + 1);
            MultiIndex xxu(n + nu, 0);
            std::copy(xmonos[i].begin(), xmonos[i].end(), xxu.begin());
            const int row = first + static_cast<int>(i);
            prog.add_entry(row, stop_off + stop_basis.index_of(tx), 1.0);
            prog.add_entry(row, joint_off + joint_basis.index_of(xxu), -1.0);
        }
    }

    // shortfall moment-matching rows: L(f^k) = eps n_k + nhat_k
    if (is_es) {
        ctx.out.shortfall_row_count = 2 * delta + 1;
        ctx.out.shortfall_row_start = prog.add_block(ConeType::Zero, ctx.out.shortfall_row_count);
        for (int k = 0; k <= 2 * delta; ++k) {
            const int row = ctx.out.shortfall_row_start + k;
            const Polynomial fk = scalar_fn.pow(k);
            const LinExpr le = is_distance_es ? joint_basis.riesz(fk)
                                              : stop_basis.riesz(lift_time(fk));
            const int src = is_distance_es ? joint_off : stop_off;
            for (const auto& t : le.terms) prog.add_entry(row, src + t.index, t.coeff);
            prog.add_entry(row, n_off + k, -spec.eps);
            prog.add_entry(row, nhat_off + k, -1.0);
        }
        ctx.out.norm_row = prog.add_block(ConeType::Zero, 1);
        prog.add_entry(ctx.out.norm_row, n_off + 0, 1.0);
        prog.set_rhs(ctx.out.norm_row, 1.0);
    }

    // ---- PSD localizer blocks ----
    ctx.emit_psd_blocks();

    // ---- tail second-order block, last so embeddings do not shift rows ----
    if (is_tail) {
        const LinExpr Lp = stop_basis.riesz(lift_time(scalar_fn));
        const LinExpr Lp2 = stop_basis.riesz(lift_time(scalar_fn * scalar_fn));
        const int first = prog.add_block(ConeType::SOC, 4);
        ctx.out.soc_row_start = first;
        // entries: (1 - L(p^2), 2c, 2 L(p), 1 + L(p^2))
        prog.set_rhs(first + 0, 1.0);
        for (const auto& t : Lp2.terms) prog.add_entry(first + 0, stop_off + t.index, t.coeff);
        prog.add_entry(first + 1, c_var, -2.0);
        for (const auto& t : Lp.terms) prog.add_entry(first + 2, stop_off + t.index, -2.0 * t.coeff);
        prog.set_rhs(first + 3, 1.0);
        for (const auto& t : Lp2.terms) prog.add_entry(first + 3, stop_off + t.index, -t.coeff);
    }

    // ---- objective ----
    if (is_es) {
        prog.c[static_cast<size_t>(n_off + 1)] = is_distance_es ? -1.0 : 1.0;
        ctx.out.objective_sign = is_distance_es ? -1.0 : 1.0;
    } else {
        const LinExpr Lp = stop_basis.riesz(lift_time(scalar_fn));
        for (const auto& t : Lp.terms) prog.c[static_cast<size_t>(stop_off + t.index)] += t.coeff;
        if (is_tail) prog.c[static_cast<size_t>(c_var)] = r;
    }
    ctx.out.tail_r = r;

    if (spec.soc_as_psd) ctx.out.program = conic::soc_to_psd(ctx.out.program);
    ctx.out.program.validate();
    return std::move(ctx.out);
}

}  // namespace

AssembledProgram build(const BoundSpec& spec) {
    spec.validate();
    if (spec.kind == BoundKind::DistanceTail) {
        AssembledProgram prog = build_core(augment_for_distance_tail(spec));
        prog.objective_sign = -1.0;  // reported as a squared-distance lower bound
        return prog;
    }
    return build_core(spec);
}

BoundResult solve_assembled(const BoundSpec& spec, const AssembledProgram& prog,
                            const conic::SolverSettings& settings) {
    BoundResult res;
    res.solution = conic::solve(prog.program, settings);
    res.status = res.solution.status;
    res.iterations = res.solution.iterations;
    res.duality_gap = res.solution.primal_obj - res.solution.dual_obj;
    res.value = prog.objective_sign * res.solution.primal_obj;
    if (spec.kind == BoundKind::DistanceES || spec.kind == BoundKind::DistanceTail)
        res.value = std::max(res.value, 0.0);
    for (const auto& m : prog.measures)
        res.moments[m.name] = res.solution.x.segment(m.var_offset, m.size);
    return res;
}

BoundResult solve_bound(const BoundSpec& spec, const conic::SolverSettings& settings) {
    return solve_assembled(spec, build(spec), settings);
}

Certificate extract_certificate(const BoundSpec& spec, const AssembledProgram& prog,
                                const conic::ConicSolution& sol) {
    if (spec.kind == BoundKind::DistanceES || spec.kind == BoundKind::DistanceTail)
        throw std::invalid_argument("certificate extraction covers the direct bound kinds only");
    if (prog.dynamics_row_start < 0 || sol.y.size() != prog.program.num_rows())
        throw std::invalid_argument("certificate extraction needs duals from this program");

    Certificate cert;
    const int n = spec.process.state_dim;
    Polynomial v = Polynomial::zero(n + 1);
    for (size_t i = 0; i < prog.dynamics_monomials.size(); ++i) {
        const double y = sol.y[prog.dynamics_row_start + static_cast<int>(i)];
        if (std::abs(y) > poly::kCoeffDropTol)
            v = v + Polynomial::monomial(prog.dynamics_monomials[i], y);
    }
    cert.v = v;
    if (spec.kind == BoundKind::Cantelli || spec.kind == BoundKind::VP) {
        if (prog.soc_row_start < 0)
            throw std::invalid_argument("tail certificate needs the native second-order block");
        const double e1 = sol.y[prog.soc_row_start + 0];
        const double e3 = sol.y[prog.soc_row_start + 2];
        const double es = sol.y[prog.soc_row_start + 3];
        cert.u = {e1 - es, -2.0 * e3};  // v + u0 p^2 + u1 p >= p
    } else if (spec.kind == BoundKind::ES) {
        Polynomial w = Polynomial::zero(1);
        for (int k = 0; k < prog.shortfall_row_count; ++k) {
            const double y = sol.y[prog.shortfall_row_start + k];
            if (std::abs(y) > poly::kCoeffDropTol) w = w + Polynomial::monomial({k}, -y);
        }
        cert.w = w;
        cert.has_w = true;
        cert.u = {sol.y[prog.norm_row]};
    }
    cert.dual_value = sol.dual_obj;
    return cert;
}

ViolationReport verify_certificate(const Certificate& cert, const BoundSpec& spec,
                                   int grid_density) {
    if (spec.X.box_lo.empty())
        throw std::invalid_argument("certificate check needs a bounding box on the state set");
    const int n = spec.process.state_dim;
    const double T = spec.process.horizon;
    const auto subs = subsystems_of(spec.process);

    std::vector<poly::CompiledPoly> lie_v;
    for (const auto& sub : subs)
        lie_v.emplace_back(apply_subgenerator(sub, n, cert.v));
    poly::CompiledPoly cv(cert.v);
    poly::CompiledPoly cp(lift_time(spec.p));

    ViolationReport rep;
    double max_abs_v = 0.0, max_abs_p = 0.0;

    std::vector<double> pt(static_cast<size_t>(n) + 1, 0.0);
    std::vector<int> idx(static_cast<size_t>(n) + 1, 0);
    const int g = std::max(grid_density, 2);
    bool done = false;
    while (!done) {
        pt[0] = T * idx[0] / (g - 1);
        for (int k = 0; k < n; ++k) {
            const double lo = spec.X.box_lo[k], hi = spec.X.box_hi[k];
            pt[k + 1] = lo + (hi - lo) * idx[k + 1] / (g - 1);
        }
        // only check points inside the semialgebraic set
        std::vector<double> x(pt.begin() + 1, pt.end());
        if (spec.X.contains(x, 1e-9)) {
            const double vv = cv.eval(pt.data());
            const double pv = cp.eval(pt.data());
            max_abs_v = std::max(max_abs_v, std::abs(vv));
            max_abs_p = std::max(max_abs_p, std::abs(pv));
            for (const auto& lv : lie_v) rep.generator = std::max(rep.generator, lv.eval(pt.data()));
            double lhs = vv;
            double rhs = pv;
            if (cert.u.size() == 2) {  // tail adjustment
                lhs += cert.u[0] * pv * pv + cert.u[1] * pv;
            } else if (cert.has_w) {
                rhs = cert.w.evaluate({pv});
            }
            rep.dominance = std::max(rep.dominance, rhs - lhs);
        }
        // advance the mixed-radix counter
        int k = 0;
        while (k <= n && ++idx[k] == g) idx[k++] = 0;
        done = k > n;
    }

    if (cert.has_w) {
        auto [lo, hi] = model::polynomial_range_on_box(spec.p, spec.X.box_lo, spec.X.box_hi);
        for (int i = 0; i < g * g; ++i) {
            const double s = lo + (hi - lo) * i / (g * g - 1);
            const double ws = cert.w.evaluate({s});
            rep.scalar_lower = std::max(rep.scalar_lower, s - (cert.u[0] + spec.eps * ws));
            rep.w_negative = std::max(rep.w_negative, -ws);
        }
    }
    rep.scale = std::max({1.0, max_abs_v, max_abs_p});
    return rep;
}

double ViolationReport::worst() const {
    return std::max({generator, dominance, scalar_lower, w_negative});
}

}  // namespace peakrisk::assemble
