#include "peakrisk/conic.hpp"

#include <json.hpp>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <cstdio>

namespace peakrisk::conic {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

int total_rows(const std::vector<ConeBlock>& cones) {
    int m = 0;
    for (const auto& blk : cones) m += block_vec_len(blk);
    return m;
}

// svec layout: upper triangle in column-major order, (i,j) with i<=j at
// position j*(j+1)/2 + i; off-diagonal entries carry a sqrt(2) factor.
void unsvec(const double* v, int side, Eigen::MatrixXd& M) {
    M.resize(side, side);
    int p = 0;
    for (int j = 0; j < side; ++j) {
        for (int i = 0; i <= j; ++i, ++p) {
            double val = (i == j) ? v[p] : v[p] / kSqrt2;
            M(i, j) = val;
            M(j, i) = val;
        }
    }
}

void svec(const Eigen::MatrixXd& M, double* v) {
    const int side = static_cast<int>(M.rows());
    int p = 0;
    for (int j = 0; j < side; ++j)
        for (int i = 0; i <= j; ++i, ++p) v[p] = (i == j) ? M(i, j) : M(i, j) * kSqrt2;
}

void project_psd_block(double* v, int side) {
    Eigen::MatrixXd M;
    unsvec(v, side, M);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success) throw std::runtime_error("PSD projection: eigendecomposition failed");
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    M.noalias() = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    svec(M, v);
}

void project_soc_block(double* v, int len) {
    // layout (y, s), s last
    const int k = len - 1;
    double yn = 0.0;
    for (int i = 0; i < k; ++i) yn += v[i] * v[i];
    yn = std::sqrt(yn);
    const double s = v[k];
    if (yn <= s) return;
    if (yn <= -s) {
        std::fill(v, v + len, 0.0);
        return;
    }
    const double a = 0.5 * (yn + s);
    const double scale = a / yn;
    for (int i = 0; i < k; ++i) v[i] *= scale;
    v[k] = a;
}

void project_blocks(Eigen::VectorXd& v, const std::vector<ConeBlock>& cones, bool dual) {
    int at = 0;
    for (const auto& blk : cones) {
        const int len = block_vec_len(blk);
        switch (blk.type) {
            case ConeType::Zero:
                if (dual) {
                    // dual of {0} is the free cone: identity
                } else {
                    v.segment(at, len).setZero();
                }
                break;
            case ConeType::Nonneg:
                v.segment(at, len) = v.segment(at, len).cwiseMax(0.0);
                break;
            case ConeType::SOC:
                project_soc_block(v.data() + at, len);
                break;
            case ConeType::PSD:
                project_psd_block(v.data() + at, blk.size);
                break;
        }
        at += len;
    }
}

struct ScaledData {
    Eigen::SparseMatrix<double> A;  // row-major not needed; keep CSC
    Eigen::VectorXd b, c;           // minimize c'x internally (c = -c_max)
    Eigen::VectorXd D, E;           // row / column scalings: A_scaled = diag(D) A diag(E)
};

// Ruiz equilibration; rows belonging to a SOC/PSD block share one scale so the
// cone is invariant under the scaling.
void equilibrate(ScaledData& sd, const std::vector<ConeBlock>& cones, int passes) {
    const int m = static_cast<int>(sd.A.rows());
    const int n = static_cast<int>(sd.A.cols());
    sd.D = Eigen::VectorXd::Ones(m);
    sd.E = Eigen::VectorXd::Ones(n);
    if (m == 0 || n == 0) return;
    for (int pass = 0; pass < passes; ++pass) {
        Eigen::VectorXd rnorm = Eigen::VectorXd::Zero(m);
        Eigen::VectorXd cnorm = Eigen::VectorXd::Zero(n);
        for (int j = 0; j < n; ++j) {
            for (Eigen::SparseMatrix<double>::InnerIterator it(sd.A, j); it; ++it) {
                const double a = std::abs(it.value());
                rnorm[it.row()] = std::max(rnorm[it.row()], a);
                cnorm[j] = std::max(cnorm[j], a);
            }
        }
        int at = 0;
        for (const auto& blk : cones) {
            const int len = block_vec_len(blk);
            if (blk.type == ConeType::SOC || blk.type == ConeType::PSD) {
                const double mx = rnorm.segment(at, len).maxCoeff();
                rnorm.segment(at, len).setConstant(mx);
            }
            at += len;
        }
        Eigen::VectorXd dr(m), dc(n);
        for (int i = 0; i < m; ++i) dr[i] = rnorm[i] > 0 ? 1.0 / std::sqrt(rnorm[i]) : 1.0;
        for (int j = 0; j < n; ++j) dc[j] = cnorm[j] > 0 ? 1.0 / std::sqrt(cnorm[j]) : 1.0;
        sd.A = dr.asDiagonal() * sd.A * dc.asDiagonal();
        sd.D.array() *= dr.array();
        sd.E.array() *= dc.array();
    }
    sd.b.array() *= sd.D.array();
    sd.c.array() *= sd.E.array();
}

struct Residuals {
    double rp = 0, rd = 0, gap = 0;
    double tol_p = 0, tol_d = 0, tol_g = 0;
    bool pass(double scale) const {
        return rp <= scale * tol_p && rd <= scale * tol_d && gap <= scale * tol_g;
    }
};

}  // namespace

const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::Inaccurate: return "Inaccurate";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::Unbounded: return "Unbounded";
        case SolveStatus::IterLimit: return "IterLimit";
    }
    return "Unknown";
}

int ConicProgram::add_vars(int k) {
    if (k < 0) throw std::invalid_argument("add_vars: negative count");
    const int first = num_vars;
    num_vars += k;
    c.resize(num_vars, 0.0);
    return first;
}

int ConicProgram::add_block(ConeType type, int size) {
    if (size <= 0 || (type == ConeType::SOC && size < 2))
        throw std::invalid_argument("add_block: invalid block size");
    const int first = num_rows();
    cones.push_back({type, size});
    b.resize(first + block_vec_len(cones.back()), 0.0);
    return first;
}

void ConicProgram::add_entry(int row, int col, double value) {
    if (row < 0 || row >= num_rows() || col < 0 || col >= num_vars)
        throw std::out_of_range("add_entry: index out of range");
    if (value != 0.0) A_triplets.emplace_back(row, col, value);
}

void ConicProgram::set_rhs(int row, double value) {
    if (row < 0 || row >= num_rows()) throw std::out_of_range("set_rhs: row out of range");
    b[static_cast<size_t>(row)] = value;
}

void ConicProgram::validate() const {
    if (static_cast<int>(c.size()) != num_vars) throw std::invalid_argument("objective length mismatch");
    if (total_rows(cones) != num_rows()) throw std::invalid_argument("cone sizes do not match rhs length");
    for (const auto& t : A_triplets) {
        if (t.row() < 0 || t.row() >= num_rows() || t.col() < 0 || t.col() >= num_vars)
            throw std::invalid_argument("A entry out of range");
        if (!std::isfinite(t.value())) throw std::invalid_argument("A entry not finite");
    }
}

Eigen::VectorXd project_cone(const Eigen::VectorXd& v, const std::vector<ConeBlock>& cones) {
    if (v.size() != total_rows(cones)) throw std::invalid_argument("project_cone: length mismatch");
    Eigen::VectorXd out = v;
    project_blocks(out, cones, /*dual=*/false);
    return out;
}

Eigen::VectorXd project_dual_cone(const Eigen::VectorXd& v, const std::vector<ConeBlock>& cones) {
    if (v.size() != total_rows(cones)) throw std::invalid_argument("project_dual_cone: length mismatch");
    Eigen::VectorXd out = v;
    project_blocks(out, cones, /*dual=*/true);
    return out;
}

ConicSolution solve(const ConicProgram& prog, const SolverSettings& settings) {
    prog.validate();
    const int n = prog.num_vars;
    const int m = prog.num_rows();

    Eigen::SparseMatrix<double> A_orig(m, n);
    A_orig.setFromTriplets(prog.A_triplets.begin(), prog.A_triplets.end());
    A_orig.prune(0.0);
    Eigen::VectorXd b_orig = Eigen::Map<const Eigen::VectorXd>(prog.b.data(), m);
    Eigen::VectorXd c_max = Eigen::Map<const Eigen::VectorXd>(prog.c.data(), n);

    ScaledData sd;
    sd.A = A_orig;
    sd.b = b_orig;
    sd.c = -c_max;  // internal minimization
    if (settings.equilibrate) equilibrate(sd, prog.cones, 10);
    else {
        sd.D = Eigen::VectorXd::Ones(m);
        sd.E = Eigen::VectorXd::Ones(n);
    }
    // balance the two objective vectors; this sets the implicit step size of
    // the splitting and keeps primal and dual residuals comparable
    const double sigma_b = 1.0 / std::max(sd.b.norm(), 1e-6);
    const double sigma_c = 1.0 / std::max(sd.c.norm(), 1e-6);
    sd.b *= sigma_b;
    sd.c *= sigma_c;

    // Factor the quasidefinite reduced system [[I, A'], [A, -I]] once.
    Eigen::SparseMatrix<double> K(n + m, n + m);
    {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<size_t>(sd.A.nonZeros()) * 2 + n + m);
        for (int i = 0; i < n; ++i) trips.emplace_back(i, i, 1.0);
        for (int i = 0; i < m; ++i) trips.emplace_back(n + i, n + i, -1.0);
        for (int j = 0; j < n; ++j)
            for (Eigen::SparseMatrix<double>::InnerIterator it(sd.A, j); it; ++it) {
                trips.emplace_back(n + static_cast<int>(it.row()), j, it.value());
                trips.emplace_back(j, n + static_cast<int>(it.row()), it.value());
            }
        K.setFromTriplets(trips.begin(), trips.end());
    }
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(K);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("conic solve: factorization failed");

    auto kkt_solve = [&](const Eigen::VectorXd& rx, const Eigen::VectorXd& ry,
                         Eigen::VectorXd& zx, Eigen::VectorXd& zy) {
        Eigen::VectorXd rhs(n + m);
        rhs.head(n) = rx;
        rhs.tail(m) = -ry;
        Eigen::VectorXd sol = ldlt.solve(rhs);
        zx = sol.head(n);
        zy = sol.tail(m);
    };

    Eigen::VectorXd gx, gy;
    kkt_solve(sd.c, sd.b, gx, gy);
    const double denom = 1.0 + sd.c.dot(gx) + sd.b.dot(gy);

    const int N = n + m + 1;
    // (I + Q)^{-1} applied to w
    auto lin_solve = [&](const Eigen::VectorXd& w) {
        Eigen::VectorXd tx, ty;
        kkt_solve(w.head(n), w.segment(n, m), tx, ty);
        const double ztau = (w[N - 1] + sd.c.dot(tx) + sd.b.dot(ty)) / denom;
        Eigen::VectorXd z(N);
        z.head(n) = tx - ztau * gx;
        z.segment(n, m) = ty - ztau * gy;
        z[N - 1] = ztau;
        return z;
    };

    // One splitting iteration on stacked w = (u, v).
    auto apply_G = [&](const Eigen::VectorXd& w) {
        Eigen::VectorXd u = w.head(N), v = w.tail(N);
        Eigen::VectorXd ut = lin_solve(u + v);
        ut = settings.alpha * ut + (1.0 - settings.alpha) * u;
        Eigen::VectorXd un = ut - v;
        // projection onto R^n x K* x R_+
        Eigen::VectorXd yseg = un.segment(n, m);
        project_blocks(yseg, prog.cones, /*dual=*/true);
        un.segment(n, m) = yseg;
        un[N - 1] = std::max(un[N - 1], 0.0);
        Eigen::VectorXd vn = v - ut + un;
        Eigen::VectorXd out(2 * N);
        out.head(N) = un;
        out.tail(N) = vn;
        return out;
    };

    ConicSolution sol;
    sol.x = Eigen::VectorXd::Zero(n);
    sol.y = Eigen::VectorXd::Zero(m);
    sol.s = b_orig;

    const double nb = b_orig.norm(), nc = c_max.norm();

    auto compute_residuals = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& s) {
        Residuals r;
        Eigen::VectorXd Ax = A_orig * x;
        Eigen::VectorXd Aty = A_orig.transpose() * y;
        r.rp = (Ax + s - b_orig).norm();
        r.rd = (Aty - c_max).norm();
        const double pobj = c_max.dot(x), dobj = b_orig.dot(y);
        r.gap = std::abs(pobj - dobj);
        r.tol_p = settings.eps_abs + settings.eps_rel * std::max({Ax.norm(), s.norm(), nb});
        r.tol_d = settings.eps_abs + settings.eps_rel * std::max(Aty.norm(), nc);
        r.tol_g = settings.eps_abs + settings.eps_rel * std::max(std::abs(pobj), std::abs(dobj));
        return r;
    };

    Eigen::VectorXd w = Eigen::VectorXd::Zero(2 * N);
    w[N - 1] = 1.0;      // tau
    w[2 * N - 1] = 1.0;  // kappa
    const double w_norm0 = w.norm();

    // Anderson acceleration history (type II, regularized, safeguarded)
    std::vector<Eigen::VectorXd> hist_dw, hist_df;
    Eigen::VectorXd last_w, last_f;
    bool have_last = false;

    int iter = 0;
    bool done = false;
    bool have_eval = false;
    int aa_accepted = 0;
    Eigen::VectorXd Gw, f;
    for (iter = 1; iter <= settings.max_iter && !done; ++iter) {
        // the splitting map is positively homogeneous; keep the iterate on a
        // fixed scale so it cannot collapse onto the trivial zero fixed point
        const double wn = w.norm();
        if (wn > 0 && std::abs(wn - w_norm0) > 1e-3 * w_norm0) {
            const double sc = w_norm0 / wn;
            w *= sc;
            if (have_eval) {
                Gw *= sc;
                f *= sc;
            }
            hist_dw.clear();
            hist_df.clear();
            have_last = false;
        }
        if (!have_eval) {
            Gw = apply_G(w);
            f = Gw - w;
        }
        have_eval = false;
        const double fnorm = f.norm();

        if (!std::isfinite(fnorm)) throw std::runtime_error("conic solve: iterate diverged");

        const bool checking = (iter % settings.check_interval == 0) || iter == settings.max_iter;
        if (checking) {
            // Extract candidates from the plain iterate, whose (u, v) parts
            // satisfy the cone memberships exactly.
            const auto& u = Gw;  // head(N)
            const double tau = u[N - 1];
            if (tau > 1e-12) {
                Eigen::VectorXd x = sd.E.cwiseProduct(u.head(n)) / (tau * sigma_b);
                Eigen::VectorXd y = sd.D.cwiseProduct(u.segment(n, m)) / (tau * sigma_c);
                Eigen::VectorXd s = Gw.segment(N + n, m).cwiseQuotient(sd.D) / (tau * sigma_b);
                Residuals r = compute_residuals(x, y, s);
                sol.x = x;
                sol.y = y;
                sol.s = s;
                sol.res_primal = r.rp;
                sol.res_dual = r.rd;
                sol.res_gap = r.gap;
                if (settings.verbose && iter % (settings.check_interval * 40) == 0)
                    std::printf("iter %6d f %.3e rp %.3e rd %.3e rg %.3e tau %.3e aa %d\n", iter,
                                f.norm(), r.rp, r.rd, r.gap, tau, aa_accepted);
                if (r.pass(1.0)) {
                    sol.status = SolveStatus::Optimal;
                    done = true;
                }
            }
            if (!done) {
                // infeasibility / unboundedness certificates from the ray
                Eigen::VectorXd ydir = sd.D.cwiseProduct(u.segment(n, m));
                const double by = b_orig.dot(ydir);
                if (by < 0) {
                    ydir /= -by;
                    if ((A_orig.transpose() * ydir).norm() <=
                        settings.eps_infeasible * (1.0 + nb)) {
                        sol.y = ydir;
                        sol.status = SolveStatus::Infeasible;
                        done = true;
                    }
                }
                if (!done) {
                    Eigen::VectorXd xdir = sd.E.cwiseProduct(u.head(n));
                    const double cx = c_max.dot(xdir);
                    if (cx > 0) {
                        xdir /= cx;
                        Eigen::VectorXd slack = project_cone(-(A_orig * xdir), prog.cones);
                        if ((A_orig * xdir + slack).norm() <=
                            settings.eps_infeasible * (1.0 + nc)) {
                            sol.x = xdir;
                            sol.status = SolveStatus::Unbounded;
                            done = true;
                        }
                    }
                }
            }
            if (done) break;
        }

        // next iterate: plain step, possibly replaced by a safeguarded
        // accelerated one (accepted only if it shrinks the map residual)
        Eigen::VectorXd w_next = Gw;
        if (settings.use_acceleration) {
            if (have_last) {
                hist_dw.push_back(w - last_w);
                hist_df.push_back(f - last_f);
                if (static_cast<int>(hist_dw.size()) > settings.aa_memory) {
                    hist_dw.erase(hist_dw.begin());
                    hist_df.erase(hist_df.begin());
                }
            }
            last_w = w;
            last_f = f;
            have_last = true;
            const int k = static_cast<int>(hist_dw.size());
            if (k > 0) {
                Eigen::MatrixXd G_mat = Eigen::MatrixXd::Zero(k, k);
                Eigen::VectorXd rhs(k);
                for (int a = 0; a < k; ++a) {
                    rhs[a] = hist_df[a].dot(f);
                    for (int bcol = a; bcol < k; ++bcol) {
                        G_mat(a, bcol) = hist_df[a].dot(hist_df[bcol]);
                        G_mat(bcol, a) = G_mat(a, bcol);
                    }
                }
                const double reg = 1e-12 * std::max(G_mat.trace(), 1.0);
                G_mat.diagonal().array() += reg;
                Eigen::VectorXd gamma = G_mat.ldlt().solve(rhs);
                Eigen::VectorXd w_aa = w + f;
                for (int a = 0; a < k; ++a) w_aa -= gamma[a] * (hist_dw[a] + hist_df[a]);
                if (w_aa.allFinite()) {
                    Eigen::VectorXd G_aa = apply_G(w_aa);
                    Eigen::VectorXd f_aa = G_aa - w_aa;
                    if (f_aa.norm() < fnorm) {
                        ++aa_accepted;
                        // reuse the evaluation at the accepted point
                        w = w_aa;
                        Gw = std::move(G_aa);
                        f = std::move(f_aa);
                        have_eval = true;
                        continue;
                    }
                    hist_dw.clear();
                    hist_df.clear();
                    have_last = false;
                }
            }
        }
        w = w_next;
    }
    sol.iterations = std::min(iter, settings.max_iter);

    if (sol.status == SolveStatus::IterLimit) {
        // loose-tolerance classification of the best candidate
        Residuals r = compute_residuals(sol.x, sol.y, sol.s);
        const double relax = 2e-4 / std::max(settings.eps_abs, settings.eps_rel);
        if (r.pass(relax)) sol.status = SolveStatus::Inaccurate;
    }
    sol.primal_obj = c_max.dot(sol.x);
    sol.dual_obj = b_orig.dot(sol.y);
    return sol;
}

ConicProgram soc_to_psd(const ConicProgram& prog) {
    prog.validate();
    ConicProgram out;
    out.num_vars = prog.num_vars;
    out.c = prog.c;

    // group triplets and rhs by original row
    std::vector<std::vector<std::pair<int, double>>> rows(prog.num_rows());
    for (const auto& t : prog.A_triplets) rows[t.row()].emplace_back(t.col(), t.value());

    int at = 0;
    for (const auto& blk : prog.cones) {
        const int len = block_vec_len(blk);
        if (blk.type != ConeType::SOC) {
            const int first = out.add_block(blk.type, blk.size);
            for (int i = 0; i < len; ++i) {
                out.set_rhs(first + i, prog.b[static_cast<size_t>(at + i)]);
                for (const auto& [col, val] : rows[at + i]) out.add_entry(first + i, col, val);
            }
        } else {
            // (y, s) with |y| <= s  <=>  [[s, y'], [y, s I]] is PSD
            const int k = blk.size;  // matrix side
            const int first = out.add_block(ConeType::PSD, k);
            auto place = [&](int i, int j, int src_row, double factor) {
                // svec position of (i, j), i <= j; factor multiplies the
                // source row (already includes the sqrt(2) off-diagonal scale)
                const int pos = first + j * (j + 1) / 2 + i;
                out.b[static_cast<size_t>(pos)] += factor * prog.b[static_cast<size_t>(src_row)];
                for (const auto& [col, val] : rows[src_row]) out.add_entry(pos, col, factor * val);
            };
            const int s_row = at + k - 1;  // SOC scalar component
            place(0, 0, s_row, 1.0);
            for (int i = 1; i < k; ++i) {
                place(0, i, at + i - 1, kSqrt2);  // y_{i-1} off-diagonal
                place(i, i, s_row, 1.0);
            }
        }
        at += len;
    }
    return out;
}

std::string export_portable(const ConicProgram& prog) {
    prog.validate();
    // combine duplicates, drop zeros, sort by (row, col)
    std::vector<Eigen::Triplet<double>> trips = prog.A_triplets;
    std::sort(trips.begin(), trips.end(), [](const auto& a, const auto& b) {
        return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
    });
    std::vector<int> rows_v, cols_v;
    std::vector<double> vals_v;
    for (size_t i = 0; i < trips.size();) {
        size_t j = i;
        double acc = 0.0;
        while (j < trips.size() && trips[j].row() == trips[i].row() && trips[j].col() == trips[i].col())
            acc += trips[j++].value();
        if (acc != 0.0) {
            rows_v.push_back(trips[i].row());
            cols_v.push_back(trips[i].col());
            vals_v.push_back(acc);
        }
        i = j;
    }
    nlohmann::json j;
    j["format"] = "conic-program/1";
    j["num_vars"] = prog.num_vars;
    j["objective"] = prog.c;
    j["rhs"] = prog.b;
    nlohmann::json cones = nlohmann::json::array();
    for (const auto& blk : prog.cones) {
        const char* name = blk.type == ConeType::Zero     ? "zero"
                           : blk.type == ConeType::Nonneg ? "nonneg"
                           : blk.type == ConeType::SOC    ? "soc"
                                                          : "psd";
        cones.push_back({{"type", name}, {"size", blk.size}});
    }
    j["cones"] = cones;
    j["A"] = {{"rows", rows_v}, {"cols", cols_v}, {"values", vals_v}};
    return j.dump(2);
}

ConicProgram import_portable(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != "conic-program/1")
        throw std::invalid_argument("unsupported program format");
    ConicProgram prog;
    prog.num_vars = j.at("num_vars").get<int>();
    prog.c = j.at("objective").get<std::vector<double>>();
    prog.b = j.at("rhs").get<std::vector<double>>();
    for (const auto& cj : j.at("cones")) {
        const std::string name = cj.at("type").get<std::string>();
        ConeType t;
        if (name == "zero") t = ConeType::Zero;
        else if (name == "nonneg") t = ConeType::Nonneg;
        else if (name == "soc") t = ConeType::SOC;
        else if (name == "psd") t = ConeType::PSD;
        else throw std::invalid_argument("unknown cone type: " + name);
        prog.cones.push_back({t, cj.at("size").get<int>()});
    }
    const auto rows_v = j.at("A").at("rows").get<std::vector<int>>();
    const auto cols_v = j.at("A").at("cols").get<std::vector<int>>();
    const auto vals_v = j.at("A").at("values").get<std::vector<double>>();
    if (rows_v.size() != cols_v.size() || rows_v.size() != vals_v.size())
        throw std::invalid_argument("triplet arrays have mismatched lengths");
    for (size_t i = 0; i < rows_v.size(); ++i)
        prog.A_triplets.emplace_back(rows_v[i], cols_v[i], vals_v[i]);
    prog.validate();
    return prog;
}

}  // namespace peakrisk::conic
