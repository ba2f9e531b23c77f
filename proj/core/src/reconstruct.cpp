#include "wlseno/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wlseno {

Reconstructor::Reconstructor(const AhfMesh& mesh, const ReconConfig& cfg)
    : mesh_(&mesh), cfg_(cfg) {
    if (cfg.degree < 0) throw std::invalid_argument("Reconstructor: negative degree");
    mis_ = MultiIndexSet::make(mesh.dim, cfg.degree);
    rule_ = simplex_quadrature(mesh.dim, cfg.degree);
    const int ne = mesh.n_elems();
    const int p = n_coeffs();
    stencils_.resize(ne);
    row_off_.resize(ne + 1, 0);
    h_.resize(ne);
    fadj_.resize(ne);
    for (int e = 0; e < ne; ++e) {
        stencils_[e] =
            stencil_for_degree(mesh, e, cfg.degree, cfg.target_mult, cfg.depth_cap_sixths);
        row_off_[e + 1] =
            row_off_[e] + stencils_[e].members.size() * static_cast<size_t>(p);
    }
    rows_.resize(row_off_[ne]);
    for (int e = 0; e < ne; ++e) {
        const Stencil& st = stencils_[e];
        const int n = static_cast<int>(st.members.size());
        double* rows = rows_.data() + row_off_[e];
        std::vector<double> tmp(p);
        double hsum = 0.0;
        for (int j = 0; j < n; ++j) {
            const SituatedCell& m = st.members[j];
            cell_moments_into(mesh, m.cell, mesh.centroid[e], m.shift, mis_, rule_,
                              tmp.data());
            const double inv_meas = 1.0 / mesh.measure[m.cell];
            for (int k = 0; k < p; ++k) rows[j * p + k] = tmp[k] * inv_meas;
            hsum += mesh.mean_edge_length(m.cell);
        }
        h_[e] = hsum / n;
        // stencil indices of the center's face neighbors (periodic-aware)
        const int nf = mesh.nv_per_elem();
        for (int f = 0; f < nf; ++f) {
            const int h = mesh.hf_id(e, f);
            const int sib = mesh.sibling[h];
            if (sib < 0) continue;
            SituatedCell want{mesh.hf_elem(sib), mesh.facet_shift[h]};
            for (int j = 1; j < n; ++j) {
                if (st.members[j] == want) {
                    fadj_[e].push_back(j);
                    break;
                }
            }
        }
    }
}

std::vector<double> Reconstructor::rows_for(int cell, const Stencil& st) const {
    const int p = n_coeffs();
    const int n = static_cast<int>(st.members.size());
    std::vector<double> rows(static_cast<size_t>(n) * p);
    std::vector<double> tmp(p);
    for (int j = 0; j < n; ++j) {
        const SituatedCell& m = st.members[j];
        cell_moments_into(*mesh_, m.cell, mesh_->centroid[cell], m.shift, mis_, rule_,
                          tmp.data());
        const double inv_meas = 1.0 / mesh_->measure[m.cell];
        for (int k = 0; k < p; ++k) rows[j * static_cast<size_t>(p) + k] = tmp[k] * inv_meas;
    }
    return rows;
}

void Reconstructor::gather(const double* field, int ncomp, int cell, double* out) const {
    gather_for(stencils_[cell], field, ncomp, out);
}

void Reconstructor::gather_for(const Stencil& st, const double* field, int ncomp,
                               double* out) const {
    const int n = static_cast<int>(st.members.size());
    for (int c = 0; c < ncomp; ++c)
        for (int j = 0; j < n; ++j)
            out[c * n + j] = field[static_cast<size_t>(st.members[j].cell) * ncomp + c];
}

void Reconstructor::weights(int cell, const double* ubar_scalar, double* w) const {
    const int n = stencil_size(cell);
    std::vector<double> beta(n);
    IndicatorConfig ic{cfg_.epsilon, cfg_.alpha_boost};
    compute_indicators(ubar_scalar, n, fadj_[cell].data(),
                       static_cast<int>(fadj_[cell].size()), h_[cell], ic, beta.data(), w);
}

void Reconstructor::fit(int cell, const double* ubar_blocks, int ncomp, int wcomp,
                        ReconScratch& scratch, double* coeffs) const {
    const int n = stencil_size(cell);
    const int p = n_coeffs();
    scratch.beta.resize(n);
    scratch.weight.resize(n);
    IndicatorConfig ic{cfg_.epsilon, cfg_.alpha_boost};
    compute_indicators(ubar_blocks + static_cast<size_t>(wcomp) * n, n, fadj_[cell].data(),
                       static_cast<int>(fadj_[cell].size()), h_[cell], ic,
                       scratch.beta.data(), scratch.weight.data());
    scratch.ws.factor(matrix_rows(cell), scratch.weight.data(), n, p, cfg_.rank_rtol);
    scratch.ws.solve_multi(ubar_blocks, ncomp, coeffs);
}

void Reconstructor::factor(int cell, const double* w, WlsSolver& ws) const {
    ws.factor(matrix_rows(cell), w, stencil_size(cell), n_coeffs(), cfg_.rank_rtol);
}

double Reconstructor::eval(const double* coeffs, int cell, const Point& x) const {
    double row[64];
    taylor_basis_row(mis_, x, mesh_->centroid[cell], row);
    const int p = n_coeffs();
    double s = 0.0;
    for (int k = 0; k < p; ++k) s += row[k] * coeffs[k];
    return s;
}

FaceValues reconstruct_face_values(const Reconstructor& rec, const double* field,
                                   int ncomp, int cell, ReconScratch& scratch) {
    const AhfMesh& mesh = rec.mesh();
    const ReconConfig& cfg = rec.config();
    const int p = rec.n_coeffs();
    int n = rec.stencil_size(cell);
    scratch.ubar.resize(static_cast<size_t>(n) * ncomp);
    scratch.coeffs.resize(static_cast<size_t>(p) * ncomp);
    rec.gather(field, ncomp, cell, scratch.ubar.data());
    rec.fit(cell, scratch.ubar.data(), ncomp, 0, scratch, scratch.coeffs.data());
    if (scratch.ws.rank() == 0) {
        // one retry on an enlarged ring before giving up
        const int step = (mesh.dim == 3) ? 2 : (mesh.dim == 2 ? 3 : 6);
        Stencil big =
            ring_neighbors(mesh, cell, rec.stencil(cell).depth_sixths + step);
        std::vector<double> rows = rec.rows_for(cell, big);
        n = static_cast<int>(big.members.size());
        scratch.ubar.resize(static_cast<size_t>(n) * ncomp);
        rec.gather_for(big, field, ncomp, scratch.ubar.data());
        scratch.beta.resize(n);
        scratch.weight.resize(n);
        IndicatorConfig ic{cfg.epsilon, cfg.alpha_boost};
        // adjacency indices unknown for the ad-hoc stencil; use all members
        compute_indicators(scratch.ubar.data(), n, nullptr, 0, rec.h_scale(cell), ic,
                           scratch.beta.data(), scratch.weight.data());
        scratch.ws.factor(rows.data(), scratch.weight.data(), n, p, cfg.rank_rtol);
        if (scratch.ws.rank() == 0)
            throw std::runtime_error("reconstruction failed: zero-rank system after retry");
        scratch.ws.solve_multi(scratch.ubar.data(), ncomp, scratch.coeffs.data());
    }

    const int rule_degree = cfg.rule_degree < 0 ? cfg.degree : cfg.rule_degree;
    const int nf = mesh.nv_per_elem();
    FaceValues out;
    out.quads.reserve(nf);
    out.values.resize(nf);
    double row[64];
    for (int f = 0; f < nf; ++f) {
        FaceQuadrature fq = face_quadrature(mesh, cell, f, rule_degree);
        const int nq = static_cast<int>(fq.points.size());
        out.values[f].resize(static_cast<size_t>(nq) * ncomp);
        for (int q = 0; q < nq; ++q) {
            taylor_basis_row(rec.basis(), fq.points[q], rec.center(cell), row);
            for (int c = 0; c < ncomp; ++c) {
                double s = 0.0;
                const double* v = scratch.coeffs.data() + static_cast<size_t>(c) * p;
                for (int k = 0; k < p; ++k) s += row[k] * v[k];
                out.values[f][static_cast<size_t>(q) * ncomp + c] = s;
            }
        }
        out.quads.push_back(std::move(fq));
    }
    return out;
}

namespace {

bool sit_before(const SituatedCell& a, const SituatedCell& b) {
    if (a.cell != b.cell) return a.cell < b.cell;
    for (int k = 0; k < 3; ++k)
        if (a.shift[k] != b.shift[k]) return a.shift[k] < b.shift[k];
    return false;
}

}  // namespace

Stencil rebalance_stencil(const AhfMesh& mesh, int cell, const Stencil& st,
                          const Point& grad, const double* member_avgs,
                          const double* face_values, int nfv) {
    const int n = static_cast<int>(st.members.size());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int j = 0; j < n; ++j) {
        lo = std::min(lo, member_avgs[j]);
        hi = std::max(hi, member_avgs[j]);
    }
    // slack absorbs roundoff so exact fits (constants, linears interior) pass
    const double slack = 1e-12 * (1.0 + std::fabs(lo) + std::fabs(hi));
    bool outside = false;
    for (int q = 0; q < nfv; ++q)
        if (face_values[q] < lo - slack || face_values[q] > hi + slack) {
            outside = true;
            break;
        }
    if (!outside || mesh.dim == 1) return st;

    double g2 = 0.0;
    for (int k = 0; k < mesh.dim; ++k) g2 += grad[k] * grad[k];
    const double gnorm = std::sqrt(g2);
    if (gnorm * mesh.mean_edge_length(cell) <= 1e-13 * (1.0 + hi - lo)) return st;

    const int step = (mesh.dim == 3) ? 2 : 3;
    Stencil big = ring_neighbors(mesh, cell, st.depth_sixths + step);

    struct Cand {
        SituatedCell sit;
        double dist;
    };
    std::vector<Cand> side[2];  // 0: grad side negative, 1: non-negative
    const Point& c0 = mesh.centroid[cell];
    for (size_t j = 1; j < big.members.size(); ++j) {
        const SituatedCell& m = big.members[j];
        Point d;
        for (int k = 0; k < 3; ++k)
            d[k] = mesh.centroid[m.cell][k] + m.shift[k] - c0[k];
        double s = 0.0, r2 = 0.0;
        for (int k = 0; k < mesh.dim; ++k) {
            s += grad[k] * d[k];
            r2 += d[k] * d[k];
        }
        side[s < 0.0 ? 0 : 1].push_back({m, std::sqrt(r2)});
    }
    for (auto& v : side) {
        std::sort(v.begin(), v.end(), [](const Cand& a, const Cand& b) {
            if (a.dist != b.dist) return a.dist < b.dist;
            return sit_before(a.sit, b.sit);
        });
    }

    // alternate sides, nearest first, so the counts never differ by more than
    // one; a side that runs out caps the other at its count plus one
    const int want = n - 1;
    size_t take[2] = {0, 0};
    while (static_cast<int>(take[0] + take[1]) < want) {
        int s;
        if (take[0] <= take[1] && take[0] < side[0].size())
            s = 0;
        else if (take[1] < side[1].size() && take[1] <= take[0])
            s = 1;
        else
            break;
        ++take[s];
    }

    Stencil out;
    out.center = cell;
    out.depth_sixths = big.depth_sixths;
    out.saturated = big.saturated;
    std::vector<SituatedCell> rest;
    for (int s = 0; s < 2; ++s)
        for (size_t j = 0; j < take[s]; ++j) rest.push_back(side[s][j].sit);
    std::sort(rest.begin(), rest.end(), sit_before);
    out.members.push_back(st.members[0]);
    for (auto& m : rest) out.members.push_back(m);
    return out;
}

}  // namespace wlseno
