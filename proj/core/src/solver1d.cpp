#include "wlseno/solver1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wlseno/multiindex.hpp"
#include "wlseno/quadrature.hpp"
#include "wlseno/rng.hpp"

namespace wlseno {

Grid1D Grid1D::uniform(double a, double b, int n) {
    Grid1D g;
    g.edge.resize(n + 1);
    const double dx = (b - a) / n;
    for (int i = 0; i <= n; ++i) g.edge[i] = a + i * dx;
    g.edge[n] = b;
    return g;
}

Grid1D Grid1D::perturbed(double a, double b, int n, double amp_frac, uint64_t seed) {
    Grid1D g = uniform(a, b, n);
    const double dx = (b - a) / n;
    UniformRng rng(seed);
    for (int i = 1; i < n; ++i) g.edge[i] += amp_frac * dx * rng.symmetric();
    return g;
}

void interval_moment_row(double a, double b, double x0, int degree, double* out) {
    // antiderivative of (x-x0)^k / k! is (x-x0)^{k+1} / (k+1)!
    double pb = b - x0, pa = a - x0;
    double fact = 1.0;
    const double inv_len = 1.0 / (b - a);
    for (int k = 0; k <= degree; ++k) {
        fact *= (k + 1);
        out[k] = (pb - pa) * inv_len / fact;
        pb *= (b - x0);
        pa *= (a - x0);
    }
}

void line_face_reconstruction(const Grid1D& grid, const double* ubar, int degree,
                              int stencil_n, bool periodic, const IndicatorConfig& ind,
                              double rank_rtol, double* um, double* up,
                              const double* indicator_scalar) {
    const int N = grid.n();
    const int n = stencil_n;
    const int p = degree + 1;
    if (n < p) throw std::invalid_argument("line_face_reconstruction: window smaller than basis");
    if (N < n) throw std::invalid_argument("line_face_reconstruction: grid smaller than window");
    const int l = (n - 1) / 2;
    const double period = grid.length();
    const double* s = indicator_scalar ? indicator_scalar : ubar;

    std::vector<double> xl(n), xr(n), beta(n), w(n), rows(static_cast<size_t>(n) * p), b(n);
    std::vector<double> v(p);
    WlsSolver ws;
    for (int i = 0; i < N; ++i) {
        int start = i - l;
        if (!periodic) start = std::min(std::max(start, 0), N - n);
        int ci = i - start;  // center position in the window
        for (int q = 0; q < n; ++q) {
            int j = start + q;
            double a = 0.0;
            if (periodic) {
                const int jw = ((j % N) + N) % N;
                a = (j - jw) / N * period;  // whole-period unwrap shift
                j = jw;
            }
            xl[q] = grid.edge[j] + a;
            xr[q] = grid.edge[j + 1] + a;
            b[q] = ubar[j];
            if (q != ci) {
                const double d = s[j] - s[i];
                beta[q] = d * d;  // epsilon floor added below once h is known
            }
        }
        const double h = (xr[n - 1] - xl[0]) / n;
        const double floor_ = ind.epsilon * h * h;
        for (int q = 0; q < n; ++q)
            if (q != ci) beta[q] += floor_;
        double bmin = -1.0;
        for (int q : {ci - 1, ci + 1})
            if (q >= 0 && q < n && (bmin < 0.0 || beta[q] < bmin)) bmin = beta[q];
        beta[ci] = bmin;
        for (int q = 0; q < n; ++q) w[q] = (q == ci ? ind.alpha_boost : 1.0) / beta[q];

        const double c = xr[ci];  // expansion point: the cell's right face
        for (int q = 0; q < n; ++q)
            interval_moment_row(xl[q], xr[q], c, degree, rows.data() + static_cast<size_t>(q) * p);
        ws.factor(rows.data(), w.data(), n, p, rank_rtol);
        ws.solve(b.data(), v.data());
        um[i] = v[0];
        const double dl = xl[ci] - c;
        double acc = 0.0, pw = 1.0, fact = 1.0;
        for (int k = 0; k < p; ++k) {
            acc += v[k] * pw / fact;
            pw *= dl;
            fact *= (k + 1);
        }
        up[i] = acc;
    }
}

Solver1D::Solver1D(const Grid1D& grid, const ConservationLaw& law,
                   const SolverConfig1D& cfg)
    : grid_(grid), law_(&law), cfg_(cfg) {
    if (law.dim() != 1) throw std::invalid_argument("Solver1D: law must be 1-D");
    const int n = grid_.n();
    const int deg = cfg_.recon.degree;
    p_ = deg + 1;
    nst_ = cfg_.stencil_n > 0 ? cfg_.stencil_n : 2 * static_cast<int>(0.75 * p_) + 1;
    if (nst_ < p_) throw std::invalid_argument("Solver1D: stencil smaller than basis");
    nl_ = nst_ / 2;
    g_ = std::max(nl_, nst_ - 1 - nl_);
    if (n < nst_) throw std::invalid_argument("Solver1D: grid smaller than stencil");

    // extended edges: wrap widths for periodic ends, mirrored widths for walls
    xedge_.resize(n + 2 * g_ + 1);
    for (int i = 0; i <= n; ++i) xedge_[g_ + i] = grid_.edge[i];
    for (int k = 1; k <= g_; ++k) {
        const double wl = cfg_.boundary == BoundaryMode1D::periodic ? grid_.dx(n - k)
                                                                    : grid_.dx(k - 1);
        const double wr = cfg_.boundary == BoundaryMode1D::periodic ? grid_.dx(k - 1)
                                                                    : grid_.dx(n - k);
        xedge_[g_ - k] = xedge_[g_ - k + 1] - wl;
        xedge_[g_ + n + k] = xedge_[g_ + n + k - 1] + wr;
    }

    // member order: center first, then offsets ascending
    std::vector<int> off(nst_);
    off[0] = 0;
    int idx = 1;
    for (int d = -nl_; d <= nst_ - 1 - nl_; ++d)
        if (d != 0) off[idx++] = d;
    off_ = off;

    rows_.resize(static_cast<size_t>(n) * nst_ * p_);
    eval_l_.resize(static_cast<size_t>(n) * p_);
    for (int i = 0; i < n; ++i) {
        const double x0 = xedge_[g_ + i + 1];  // right face, the 1-D expansion point
        double* rows = rows_.data() + static_cast<size_t>(i) * nst_ * p_;
        for (int q = 0; q < nst_; ++q) {
            const int j = i + off_[q];
            interval_moment_row(xedge_[g_ + j], xedge_[g_ + j + 1], x0, p_ - 1,
                                rows + static_cast<size_t>(q) * p_);
        }
        const double dl = xedge_[g_ + i] - x0;
        double* el = eval_l_.data() + static_cast<size_t>(i) * p_;
        double pw = 1.0, fact = 1.0;
        for (int k = 0; k < p_; ++k) {
            el[k] = pw / fact;
            pw *= dl;
            fact *= (k + 1);
        }
    }

    const int nc = law.ncomp();
    ue_.resize(static_cast<size_t>(n + 2 * g_) * nc);
    um_.resize(static_cast<size_t>(n + 1) * nc);
    up_.resize(static_cast<size_t>(n + 1) * nc);
    fluxes_.resize(static_cast<size_t>(n + 1) * nc);
    k1_.resize(static_cast<size_t>(n) * nc);
    k2_.resize(static_cast<size_t>(n) * nc);
    r_.resize(static_cast<size_t>(n) * nc);
    sb_.resize(nst_);
    sw_.resize(nst_);
    sub_.resize(static_cast<size_t>(nst_) * nc);
    sco_.resize(static_cast<size_t>(p_) * nc);
    proj_.resize(3 * static_cast<size_t>(nc) * nc + nc);
    char_r_.resize(nc);
    char_l_.resize(nc);
    if (cfg_.mode == ReconMode::characteristic && !law.has_eigen())
        throw std::invalid_argument("Solver1D: law lacks a characteristic decomposition");
}

void Solver1D::fill_extended(const double* u) {
    const int n = grid_.n();
    const int nc = law_->ncomp();
    std::copy(u, u + static_cast<size_t>(n) * nc, ue_.begin() + static_cast<size_t>(g_) * nc);
    const Point nx{1.0, 0.0, 0.0};
    for (int k = 0; k < g_; ++k) {
        double* gl = ue_.data() + static_cast<size_t>(k) * nc;
        double* gr = ue_.data() + static_cast<size_t>(n + g_ + k) * nc;
        if (cfg_.boundary == BoundaryMode1D::periodic) {
            const double* sl = u + static_cast<size_t>(n - g_ + k) * nc;
            const double* sr = u + static_cast<size_t>(k) * nc;
            std::copy(sl, sl + nc, gl);
            std::copy(sr, sr + nc, gr);
        } else {
            law_->mirror_state(u + static_cast<size_t>(g_ - 1 - k) * nc, nx, gl);
            law_->mirror_state(u + static_cast<size_t>(n - 1 - k) * nc, nx, gr);
        }
    }
}

void Solver1D::reconstruct_cell(int i, double* uminus_right, double* uplus_left) {
    const int nc = law_->ncomp();
    const double* rows = rows_.data() + static_cast<size_t>(i) * nst_ * p_;
    const double* el = eval_l_.data() + static_cast<size_t>(i) * p_;
    const double h = (xedge_[g_ + i + 1 + nst_ - 1 - nl_] - xedge_[g_ + i - nl_]) / nst_;
    // positions of the center's face neighbors in member order
    int fadj[2];
    int nfa = 0;
    for (int q = 1; q < nst_; ++q)
        if (off_[q] == -1 || off_[q] == 1) fadj[nfa++] = q;
    IndicatorConfig ic{cfg_.recon.epsilon, cfg_.recon.alpha_boost};

    if (cfg_.mode == ReconMode::componentwise) {
        for (int c = 0; c < nc; ++c)
            for (int q = 0; q < nst_; ++q)
                sub_[static_cast<size_t>(c) * nst_ + q] =
                    ue_[static_cast<size_t>(i + off_[q] + g_) * nc + c];
        compute_indicators(sub_.data(), nst_, fadj, nfa, h, ic, sb_.data(), sw_.data());
        ws_.factor(rows, sw_.data(), nst_, p_, cfg_.recon.rank_rtol);
        ws_.solve_multi(sub_.data(), nc, sco_.data());
        for (int c = 0; c < nc; ++c) {
            const double* v = sco_.data() + static_cast<size_t>(c) * p_;
            uminus_right[c] = v[0];
            double s = 0.0;
            for (int k = 0; k < p_; ++k) s += el[k] * v[k];
            uplus_left[c] = s;
        }
    } else {
        double* R = proj_.data();
        double* Ri = R + nc * nc;
        double* lam = Ri + nc * nc;
        const Point nx{1.0, 0.0, 0.0};
        law_->eigen(ue_.data() + static_cast<size_t>(i + g_) * nc, nx, R, Ri, lam);
        for (int q = 0; q < nst_; ++q) {
            const double* uq = ue_.data() + static_cast<size_t>(i + off_[q] + g_) * nc;
            for (int f = 0; f < nc; ++f) {
                double s = 0.0;
                for (int c = 0; c < nc; ++c) s += Ri[f * nc + c] * uq[c];
                sub_[static_cast<size_t>(f) * nst_ + q] = s;
            }
        }
        for (int f = 0; f < nc; ++f) {
            const double* wb = sub_.data() + static_cast<size_t>(f) * nst_;
            compute_indicators(wb, nst_, fadj, nfa, h, ic, sb_.data(), sw_.data());
            ws_.factor(rows, sw_.data(), nst_, p_, cfg_.recon.rank_rtol);
            double* v = sco_.data();
            ws_.solve(wb, v);
            char_r_[f] = v[0];
            double s = 0.0;
            for (int k = 0; k < p_; ++k) s += el[k] * v[k];
            char_l_[f] = s;
        }
        for (int c = 0; c < nc; ++c) {
            double sr = 0.0, sl = 0.0;
            for (int f = 0; f < nc; ++f) {
                sr += R[c * nc + f] * char_r_[f];
                sl += R[c * nc + f] * char_l_[f];
            }
            uminus_right[c] = sr;
            uplus_left[c] = sl;
        }
    }
}

void Solver1D::face_states(const double* u, double* um, double* up) {
    const int n = grid_.n();
    const int nc = law_->ncomp();
    fill_extended(u);
    double tr[8], tl[8];
    for (int i = 0; i < n; ++i) {
        reconstruct_cell(i, tr, tl);
        if (cfg_.positivity_fallback) {
            const double* avg = u + static_cast<size_t>(i) * nc;
            if (!law_->admissible(tr)) {
                std::copy(avg, avg + nc, tr);
                ++fallback_count_;
            }
            if (!law_->admissible(tl)) {
                std::copy(avg, avg + nc, tl);
                ++fallback_count_;
            }
        }
        std::copy(tr, tr + nc, um + static_cast<size_t>(i + 1) * nc);
        std::copy(tl, tl + nc, up + static_cast<size_t>(i) * nc);
    }
    if (cfg_.boundary == BoundaryMode1D::periodic) {
        std::copy(um + static_cast<size_t>(n) * nc, um + static_cast<size_t>(n + 1) * nc, um);
        std::copy(up, up + nc, up + static_cast<size_t>(n) * nc);
    } else {
        const Point nx{1.0, 0.0, 0.0};
        law_->mirror_state(up, nx, um);
        law_->mirror_state(um + static_cast<size_t>(n) * nc,
                           nx, up + static_cast<size_t>(n) * nc);
    }
}

void Solver1D::rhs(const double* u, double* out) {
    const int n = grid_.n();
    const int nc = law_->ncomp();
    face_states(u, um_.data(), up_.data());

    double alpha_glob = 0.0;
    if (!cfg_.local_lf)
        for (int i = 0; i < n; ++i)
            alpha_glob = std::max(alpha_glob, law_->max_speed(u + static_cast<size_t>(i) * nc));

    const Point nx{1.0, 0.0, 0.0};
    double fm[8], fp[8];
    const int nface = cfg_.boundary == BoundaryMode1D::periodic ? n : n + 1;
    for (int j = 0; j < nface; ++j) {
        const double* a = um_.data() + static_cast<size_t>(j) * nc;
        const double* b = up_.data() + static_cast<size_t>(j) * nc;
        law_->flux(a, nx, fm);
        law_->flux(b, nx, fp);
        const double alpha = cfg_.local_lf
                                 ? std::max(law_->normal_speed(a, nx), law_->normal_speed(b, nx))
                                 : alpha_glob;
        double* F = fluxes_.data() + static_cast<size_t>(j) * nc;
        for (int c = 0; c < nc; ++c) F[c] = 0.5 * (fm[c] + fp[c] - alpha * (b[c] - a[c]));
    }
    if (cfg_.boundary == BoundaryMode1D::periodic)
        std::copy(fluxes_.begin(), fluxes_.begin() + nc,
                  fluxes_.begin() + static_cast<size_t>(n) * nc);

    double src[8];
    for (int i = 0; i < n; ++i) {
        const double inv_dx = 1.0 / grid_.dx(i);
        const double* Fl = fluxes_.data() + static_cast<size_t>(i) * nc;
        const double* Fr = Fl + nc;
        double* o = out + static_cast<size_t>(i) * nc;
        for (int c = 0; c < nc; ++c) o[c] = -(Fr[c] - Fl[c]) * inv_dx;
        if (cfg_.source) {
            cfg_.source(u + static_cast<size_t>(i) * nc, grid_.center(i), src);
            for (int c = 0; c < nc; ++c) o[c] += src[c];
        }
    }
}

double Solver1D::stable_dt(const double* u, double sigma) const {
    const int n = grid_.n();
    const int nc = law_->ncomp();
    double dt = cfg_.dt_cap;
    for (int i = 0; i < n; ++i) {
        const double s = law_->max_speed(u + static_cast<size_t>(i) * nc);
        if (s > 0.0) dt = std::min(dt, grid_.dx(i) / s);
    }
    return std::min(sigma * dt, cfg_.dt_cap);
}

void Solver1D::rk3_step(double* u, double dt) {
    const int n = grid_.n();
    const int nc = law_->ncomp();
    const size_t sz = static_cast<size_t>(n) * nc;
    rhs(u, r_.data());
    for (size_t t = 0; t < sz; ++t) k1_[t] = u[t] + dt * r_[t];
    rhs(k1_.data(), r_.data());
    for (size_t t = 0; t < sz; ++t)
        k2_[t] = 0.75 * u[t] + 0.25 * k1_[t] + 0.25 * dt * r_[t];
    rhs(k2_.data(), r_.data());
    for (size_t t = 0; t < sz; ++t)
        u[t] = (1.0 / 3.0) * u[t] + (2.0 / 3.0) * k2_[t] + (2.0 / 3.0) * dt * r_[t];
}

void Solver1D::project_ic(const std::function<void(double x, double* u)>& ic,
                          int rule_degree, double* u) const {
    const int n = grid_.n();
    const int nc = law_->ncomp();
    QuadRule rule = segment_gauss(rule_degree);
    double val[8];
    for (int i = 0; i < n; ++i) {
        double* o = u + static_cast<size_t>(i) * nc;
        for (int c = 0; c < nc; ++c) o[c] = 0.0;
        for (int q = 0; q < rule.npts; ++q) {
            const double x = grid_.edge[i] + rule.pts[3 * q] * grid_.dx(i);
            ic(x, val);
            for (int c = 0; c < nc; ++c) o[c] += rule.w[q] * val[c];
        }
    }
}

bool Solver1D::field_admissible(const double* u) const {
    const int n = grid_.n();
    const int nc = law_->ncomp();
    for (int i = 0; i < n; ++i) {
        const double* s = u + static_cast<size_t>(i) * nc;
        for (int c = 0; c < nc; ++c)
            if (!std::isfinite(s[c])) return false;
        if (!law_->admissible(s)) return false;
    }
    return true;
}

}  // namespace wlseno
