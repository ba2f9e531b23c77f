#include "wlseno/mesh_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wlseno/geometry.hpp"
#include "wlseno/quadrature.hpp"

namespace wlseno {

MeshSolver::MeshSolver(const AhfMesh& mesh, const ConservationLaw& law,
                       const MeshSolverConfig& cfg)
    : mesh_(&mesh), law_(&law), cfg_(cfg), rec_(mesh, cfg.recon) {
    if (law.dim() != mesh.dim)
        throw std::invalid_argument("MeshSolver: law/mesh dimension mismatch");
    if (cfg.mode == ReconMode::characteristic && !law.has_eigen())
        throw std::invalid_argument("MeshSolver: law lacks a characteristic decomposition");
    if (cfg.mode == ReconMode::characteristic && cfg.recon.rebalance)
        throw std::invalid_argument(
            "MeshSolver: rebalancing is only wired into the componentwise path");

    const int ne = mesh.n_elems();
    const int nc = law.ncomp();
    const int p = rec_.n_coeffs();
    const int nfl = mesh.nv_per_elem();
    const int rule_deg =
        cfg.recon.rule_degree < 0 ? cfg.recon.degree : cfg.recon.rule_degree;

    for (int e = 0; e < ne; ++e) {
        for (int f = 0; f < nfl; ++f) {
            const int h = mesh.hf_id(e, f);
            const int sib = mesh.sibling[h];
            if (sib >= 0 && sib < h) continue;  // the partner half-facet owns it
            MFace fc;
            fc.cell_l = e;
            FaceQuadrature fq = face_quadrature(mesh, e, f, rule_deg);
            fc.normal = fq.unit_normal;
            fc.qpts = std::move(fq.points);
            fc.qw = std::move(fq.weights);
            const int nq = static_cast<int>(fc.qpts.size());
            fc.Bl.resize(static_cast<size_t>(nq) * p);
            for (int q = 0; q < nq; ++q)
                taylor_basis_row(rec_.basis(), fc.qpts[q], mesh.centroid[e],
                                 fc.Bl.data() + static_cast<size_t>(q) * p);
            if (sib >= 0) {
                fc.cell_r = mesh.hf_elem(sib);
                Point cr;
                for (int k = 0; k < 3; ++k)
                    cr[k] = mesh.centroid[fc.cell_r][k] + mesh.facet_shift[h][k];
                fc.Br.resize(static_cast<size_t>(nq) * p);
                for (int q = 0; q < nq; ++q)
                    taylor_basis_row(rec_.basis(), fc.qpts[q], cr,
                                     fc.Br.data() + static_cast<size_t>(q) * p);
            } else if (mesh.facet_tag[h] == tag_none) {
                throw std::runtime_error("MeshSolver: untagged boundary facet");
            }
            faces_.push_back(std::move(fc));
        }
    }

    coeffs_.resize(static_cast<size_t>(ne) * nc * p);
    int max_n = 0, max_nq = 0;
    for (int e = 0; e < ne; ++e) max_n = std::max(max_n, rec_.stencil_size(e));
    for (auto& fc : faces_) max_nq = std::max(max_nq, static_cast<int>(fc.qpts.size()));
    eig_.resize(2 * static_cast<size_t>(nc) * nc + nc);
    char_ub_.resize(static_cast<size_t>(max_n) * nc);
    char_co_.resize(static_cast<size_t>(nc) * p);
    tr_.resize(2 * static_cast<size_t>(max_nq) * nc);
    k1_.resize(static_cast<size_t>(ne) * nc);
    k2_.resize(static_cast<size_t>(ne) * nc);
    r_.resize(static_cast<size_t>(ne) * nc);

    if (cfg_.recon.rebalance) {
        cell_faces_.resize(ne);
        for (size_t fi = 0; fi < faces_.size(); ++fi) {
            cell_faces_[faces_[fi].cell_l].push_back({static_cast<int>(fi), 0});
            if (faces_[fi].cell_r >= 0)
                cell_faces_[faces_[fi].cell_r].push_back({static_cast<int>(fi), 1});
        }
    }
}

void MeshSolver::fit_all(const double* u) {
    const int ne = mesh_->n_elems();
    const int nc = law_->ncomp();
    const int p = rec_.n_coeffs();
    for (int e = 0; e < ne; ++e) {
        const int n = rec_.stencil_size(e);
        scratch_.ubar.resize(static_cast<size_t>(n) * nc);
        rec_.gather(u, nc, e, scratch_.ubar.data());
        double* co = coeffs_.data() + static_cast<size_t>(e) * nc * p;
        rec_.fit(e, scratch_.ubar.data(), nc, 0, scratch_, co);
        if (cfg_.recon.rebalance) rebalance_cell(e, u, co);
    }
}

void MeshSolver::rebalance_cell(int e, const double* u, double* co) {
    // range-check the scalar functional's own-side face values; on violation
    // refit on the gradient-balanced stencil
    const int nc = law_->ncomp();
    const int p = rec_.n_coeffs();
    const int n = rec_.stencil_size(e);
    std::vector<double> fv;
    for (auto& cf : cell_faces_[e]) {
        const MFace& fc = faces_[cf.first];
        const double* B = cf.second == 0 ? fc.Bl.data() : fc.Br.data();
        const int nq = static_cast<int>(fc.qpts.size());
        for (int q = 0; q < nq; ++q) {
            double s = 0.0;
            for (int k = 0; k < p; ++k) s += B[static_cast<size_t>(q) * p + k] * co[k];
            fv.push_back(s);
        }
    }
    Point grad{0.0, 0.0, 0.0};
    for (int k = 0; k < mesh_->dim; ++k) grad[k] = co[1 + k];
    const Stencil& st = rec_.stencil(e);
    Stencil st2 = rebalance_stencil(*mesh_, e, st, grad, scratch_.ubar.data(), fv.data(),
                                    static_cast<int>(fv.size()));
    if (st2.members == st.members) return;
    ++rebalance_count_;
    std::vector<double> rows = rec_.rows_for(e, st2);
    const int n2 = static_cast<int>(st2.members.size());
    std::vector<double> ub2(static_cast<size_t>(n2) * nc);
    rec_.gather_for(st2, u, nc, ub2.data());
    // face-adjacent positions inside the replacement stencil
    std::vector<int> fadj;
    const int nfl = mesh_->nv_per_elem();
    for (int f = 0; f < nfl; ++f) {
        const int h = mesh_->hf_id(e, f);
        const int sib = mesh_->sibling[h];
        if (sib < 0) continue;
        SituatedCell want{mesh_->hf_elem(sib), mesh_->facet_shift[h]};
        for (int j = 1; j < n2; ++j)
            if (st2.members[j] == want) {
                fadj.push_back(j);
                break;
            }
    }
    scratch_.beta.resize(n2);
    scratch_.weight.resize(n2);
    IndicatorConfig ic{cfg_.recon.epsilon, cfg_.recon.alpha_boost};
    compute_indicators(ub2.data(), n2, fadj.data(), static_cast<int>(fadj.size()),
                       rec_.h_scale(e), ic, scratch_.beta.data(), scratch_.weight.data());
    scratch_.ws.factor(rows.data(), scratch_.weight.data(), n2, p, cfg_.recon.rank_rtol);
    scratch_.ws.solve_multi(ub2.data(), nc, co);
    (void)n;
}

void MeshSolver::face_traces_char(const MFace& fc, int side, const double* u,
                                  double* traces) {
    const int nc = law_->ncomp();
    const int p = rec_.n_coeffs();
    const int cell = side == 0 ? fc.cell_l : fc.cell_r;
    const double* B = side == 0 ? fc.Bl.data() : fc.Br.data();
    const int nq = static_cast<int>(fc.qpts.size());
    const int n = rec_.stencil_size(cell);

    double* R = eig_.data();
    double* Ri = R + nc * nc;
    double* lam = Ri + nc * nc;
    law_->eigen(u + static_cast<size_t>(cell) * nc, fc.normal, R, Ri, lam);

    scratch_.ubar.resize(static_cast<size_t>(n) * nc);
    rec_.gather(u, nc, cell, scratch_.ubar.data());
    // project members into characteristic fields: blocks per field
    char_ub_.resize(static_cast<size_t>(n) * nc);
    for (int j = 0; j < n; ++j) {
        for (int f = 0; f < nc; ++f) {
            double s = 0.0;
            for (int c = 0; c < nc; ++c)
                s += Ri[f * nc + c] * scratch_.ubar[static_cast<size_t>(c) * n + j];
            char_ub_[static_cast<size_t>(f) * n + j] = s;
        }
    }
    scratch_.beta.resize(n);
    scratch_.weight.resize(n);
    IndicatorConfig ic{cfg_.recon.epsilon, cfg_.recon.alpha_boost};
    const auto& fadj = rec_.face_adjacent(cell);
    for (int f = 0; f < nc; ++f) {
        const double* wb = char_ub_.data() + static_cast<size_t>(f) * n;
        compute_indicators(wb, n, fadj.data(), static_cast<int>(fadj.size()),
                           rec_.h_scale(cell), ic, scratch_.beta.data(),
                           scratch_.weight.data());
        rec_.factor(cell, scratch_.weight.data(), scratch_.ws);
        scratch_.ws.solve(wb, char_co_.data() + static_cast<size_t>(f) * p);
    }
    for (int q = 0; q < nq; ++q) {
        const double* Bq = B + static_cast<size_t>(q) * p;
        double* t = traces + static_cast<size_t>(q) * nc;
        for (int c = 0; c < nc; ++c) t[c] = 0.0;
        for (int f = 0; f < nc; ++f) {
            double w = 0.0;
            const double* v = char_co_.data() + static_cast<size_t>(f) * p;
            for (int k = 0; k < p; ++k) w += Bq[k] * v[k];
            for (int c = 0; c < nc; ++c) t[c] += R[c * nc + f] * w;
        }
    }
}

void MeshSolver::rhs(const double* u, double* out) {
    const int ne = mesh_->n_elems();
    const int nc = law_->ncomp();
    const int p = rec_.n_coeffs();
    std::fill(out, out + static_cast<size_t>(ne) * nc, 0.0);

    if (cfg_.mode == ReconMode::componentwise) fit_all(u);

    double alpha_glob = 0.0;
    if (!cfg_.local_lf)
        for (int e = 0; e < ne; ++e)
            alpha_glob =
                std::max(alpha_glob, law_->max_speed(u + static_cast<size_t>(e) * nc));

    double fm[8], fp[8], acc[8];
    for (const MFace& fc : faces_) {
        const int nq = static_cast<int>(fc.qpts.size());
        double* ul = tr_.data();
        double* ur = tr_.data() + static_cast<size_t>(nq) * nc;

        if (cfg_.mode == ReconMode::componentwise) {
            const double* vl = coeffs_.data() + static_cast<size_t>(fc.cell_l) * nc * p;
            for (int q = 0; q < nq; ++q) {
                const double* Bq = fc.Bl.data() + static_cast<size_t>(q) * p;
                for (int c = 0; c < nc; ++c) {
                    double s = 0.0;
                    const double* v = vl + static_cast<size_t>(c) * p;
                    for (int k = 0; k < p; ++k) s += Bq[k] * v[k];
                    ul[static_cast<size_t>(q) * nc + c] = s;
                }
            }
            if (fc.cell_r >= 0) {
                const double* vr =
                    coeffs_.data() + static_cast<size_t>(fc.cell_r) * nc * p;
                for (int q = 0; q < nq; ++q) {
                    const double* Bq = fc.Br.data() + static_cast<size_t>(q) * p;
                    for (int c = 0; c < nc; ++c) {
                        double s = 0.0;
                        const double* v = vr + static_cast<size_t>(c) * p;
                        for (int k = 0; k < p; ++k) s += Bq[k] * v[k];
                        ur[static_cast<size_t>(q) * nc + c] = s;
                    }
                }
            }
        } else {
            face_traces_char(fc, 0, u, ul);
            if (fc.cell_r >= 0) face_traces_char(fc, 1, u, ur);
        }

        if (cfg_.positivity_fallback) {
            const double* avl = u + static_cast<size_t>(fc.cell_l) * nc;
            for (int q = 0; q < nq; ++q) {
                double* t = ul + static_cast<size_t>(q) * nc;
                if (!law_->admissible(t)) {
                    std::copy(avl, avl + nc, t);
                    ++fallback_count_;
                }
            }
            if (fc.cell_r >= 0) {
                const double* avr = u + static_cast<size_t>(fc.cell_r) * nc;
                for (int q = 0; q < nq; ++q) {
                    double* t = ur + static_cast<size_t>(q) * nc;
                    if (!law_->admissible(t)) {
                        std::copy(avr, avr + nc, t);
                        ++fallback_count_;
                    }
                }
            }
        }
        if (fc.cell_r < 0)
            for (int q = 0; q < nq; ++q)
                law_->mirror_state(ul + static_cast<size_t>(q) * nc, fc.normal,
                                   ur + static_cast<size_t>(q) * nc);

        for (int c = 0; c < nc; ++c) acc[c] = 0.0;
        for (int q = 0; q < nq; ++q) {
            const double* a = ul + static_cast<size_t>(q) * nc;
            const double* b = ur + static_cast<size_t>(q) * nc;
            law_->flux(a, fc.normal, fm);
            law_->flux(b, fc.normal, fp);
            const double alpha =
                cfg_.local_lf ? std::max(law_->normal_speed(a, fc.normal),
                                         law_->normal_speed(b, fc.normal))
                              : alpha_glob;
            for (int c = 0; c < nc; ++c)
                acc[c] += fc.qw[q] * 0.5 * (fm[c] + fp[c] - alpha * (b[c] - a[c]));
        }
        const double inv_l = 1.0 / mesh_->measure[fc.cell_l];
        double* ol = out + static_cast<size_t>(fc.cell_l) * nc;
        for (int c = 0; c < nc; ++c) ol[c] -= acc[c] * inv_l;
        if (fc.cell_r >= 0) {
            const double inv_r = 1.0 / mesh_->measure[fc.cell_r];
            double* orr = out + static_cast<size_t>(fc.cell_r) * nc;
            for (int c = 0; c < nc; ++c) orr[c] += acc[c] * inv_r;
        }
    }
}

double MeshSolver::stable_dt(const double* u, double sigma) const {
    const int ne = mesh_->n_elems();
    const int nc = law_->ncomp();
    double dt = cfg_.dt_cap;
    for (int e = 0; e < ne; ++e) {
        const double s = law_->max_speed(u + static_cast<size_t>(e) * nc);
        if (s > 0.0) dt = std::min(dt, mesh_->inradius(e) / s);
    }
    return std::min(sigma * dt, cfg_.dt_cap);
}

void MeshSolver::rk3_step(double* u, double dt) {
    const size_t sz = static_cast<size_t>(mesh_->n_elems()) * law_->ncomp();
    rhs(u, r_.data());
    for (size_t t = 0; t < sz; ++t) k1_[t] = u[t] + dt * r_[t];
    rhs(k1_.data(), r_.data());
    for (size_t t = 0; t < sz; ++t)
        k2_[t] = 0.75 * u[t] + 0.25 * k1_[t] + 0.25 * dt * r_[t];
    rhs(k2_.data(), r_.data());
    for (size_t t = 0; t < sz; ++t)
        u[t] = (1.0 / 3.0) * u[t] + (2.0 / 3.0) * k2_[t] + (2.0 / 3.0) * dt * r_[t];
}

void MeshSolver::project_ic(const std::function<void(const Point&, double*)>& ic,
                            int rule_degree, double* u) const {
    const int ne = mesh_->n_elems();
    const int nc = law_->ncomp();
    const int d = mesh_->dim;
    QuadRule rule;
    if (d == 1)
        rule = segment_gauss(rule_degree);
    else if (d == 2)
        rule = triangle_quadrature_positive(rule_degree);
    else
        rule = simplex_quadrature(3, rule_degree);
    double wsum = 0.0;
    for (double w : rule.w) wsum += w;

    double val[8];
    const int nv = mesh_->nv_per_elem();
    for (int e = 0; e < ne; ++e) {
        const int* el = mesh_->elem(e);
        const Point& v0 = mesh_->xyz[el[0]];
        double* o = u + static_cast<size_t>(e) * nc;
        for (int c = 0; c < nc; ++c) o[c] = 0.0;
        for (int q = 0; q < rule.npts; ++q) {
            Point x = v0;
            for (int k = 1; k < nv; ++k) {
                const double xi = rule.pts[3 * q + (k - 1)];
                for (int a = 0; a < 3; ++a) x[a] += xi * (mesh_->xyz[el[k]][a] - v0[a]);
            }
            ic(x, val);
            for (int c = 0; c < nc; ++c) o[c] += rule.w[q] * val[c];
        }
        for (int c = 0; c < nc; ++c) o[c] /= wsum;
    }
}

namespace {

double abs_measure(int d, const Point* v) {
    if (d == 1) return std::fabs(v[1][0] - v[0][0]);
    if (d == 2) {
        const double ax = v[1][0] - v[0][0], ay = v[1][1] - v[0][1];
        const double bx = v[2][0] - v[0][0], by = v[2][1] - v[0][1];
        return 0.5 * std::fabs(ax * by - ay * bx);
    }
    double m[3][3];
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) m[i][k] = v[i + 1][k] - v[0][k];
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return std::fabs(det) / 6.0;
}

Point midpoint(const Point& a, const Point& b) {
    return Point{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])};
}

template <typename F>
void subdivide(int d, const Point* v, int level, F&& leaf) {
    if (level == 0) {
        leaf(v);
        return;
    }
    if (d == 1) {
        const Point m = midpoint(v[0], v[1]);
        Point c0[2] = {v[0], m}, c1[2] = {m, v[1]};
        subdivide(d, c0, level - 1, leaf);
        subdivide(d, c1, level - 1, leaf);
    } else if (d == 2) {
        const Point m01 = midpoint(v[0], v[1]);
        const Point m12 = midpoint(v[1], v[2]);
        const Point m02 = midpoint(v[0], v[2]);
        const Point ch[4][3] = {{v[0], m01, m02},
                                {m01, v[1], m12},
                                {m02, m12, v[2]},
                                {m01, m12, m02}};
        for (auto& c : ch) subdivide(d, c, level - 1, leaf);
    } else {
        const Point m01 = midpoint(v[0], v[1]), m02 = midpoint(v[0], v[2]);
        const Point m03 = midpoint(v[0], v[3]), m12 = midpoint(v[1], v[2]);
        const Point m13 = midpoint(v[1], v[3]), m23 = midpoint(v[2], v[3]);
        const Point ch[8][4] = {{v[0], m01, m02, m03}, {m01, v[1], m12, m13},
                                {m02, m12, v[2], m23}, {m03, m13, m23, v[3]},
                                {m01, m02, m03, m13},  {m01, m02, m12, m13},
                                {m02, m03, m13, m23},  {m02, m12, m13, m23}};
        for (auto& c : ch) subdivide(d, c, level - 1, leaf);
    }
}

}  // namespace

void MeshSolver::project_ic_subdivided(
    const std::function<void(const Point&, double*)>& ic, int levels, double* u) const {
    const int ne = mesh_->n_elems();
    const int nc = law_->ncomp();
    const int d = mesh_->dim;
    const int nv = mesh_->nv_per_elem();
    double val[8];
    Point verts[4];
    for (int e = 0; e < ne; ++e) {
        const int* el = mesh_->elem(e);
        for (int k = 0; k < nv; ++k) verts[k] = mesh_->xyz[el[k]];
        double* o = u + static_cast<size_t>(e) * nc;
        for (int c = 0; c < nc; ++c) o[c] = 0.0;
        double vol_sum = 0.0;
        subdivide(d, verts, levels, [&](const Point* cv) {
            const double vol = abs_measure(d, cv);
            Point cen{0.0, 0.0, 0.0};
            for (int k = 0; k < nv; ++k)
                for (int a = 0; a < 3; ++a) cen[a] += cv[k][a] / nv;
            ic(cen, val);
            for (int c = 0; c < nc; ++c) o[c] += vol * val[c];
            vol_sum += vol;
        });
        for (int c = 0; c < nc; ++c) o[c] /= vol_sum;
    }
}

bool MeshSolver::field_admissible(const double* u) const {
    const int ne = mesh_->n_elems();
    const int nc = law_->ncomp();
    for (int e = 0; e < ne; ++e) {
        const double* s = u + static_cast<size_t>(e) * nc;
        for (int c = 0; c < nc; ++c)
            if (!std::isfinite(s[c])) return false;
        if (!law_->admissible(s)) return false;
    }
    return true;
}

}  // namespace wlseno
