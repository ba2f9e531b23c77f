#include "wlseno/wls.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace wlseno {

void compute_indicators(const double* ubar, int n, const int* face_adj, int n_face_adj,
                        double h, const IndicatorConfig& cfg, double* beta, double* weight) {
    if (n < 2) throw std::invalid_argument("compute_indicators: stencil too small");
    const double floor_term = cfg.epsilon * h * h;
    for (int j = 1; j < n; ++j) {
        const double d = ubar[j] - ubar[0];
        beta[j] = d * d + floor_term;
        weight[j] = 1.0 / beta[j];
    }
    double bmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_face_adj; ++k) {
        const int j = face_adj[k];
        if (j < 1 || j >= n) throw std::invalid_argument("compute_indicators: bad adjacency index");
        bmin = std::min(bmin, beta[j]);
    }
    if (n_face_adj == 0) {
        // degenerate stencil with no recorded face neighbors; fall back to all members
        for (int j = 1; j < n; ++j) bmin = std::min(bmin, beta[j]);
    }
    beta[0] = bmin;
    weight[0] = cfg.alpha_boost / bmin;
}

void WlsSolver::factor(const double* A, const double* w, int n, int p, double rank_rtol) {
    if (n < 1 || p < 1) throw std::invalid_argument("WlsSolver: empty system");
    n_ = n;
    p_ = p;
    qr_.assign(static_cast<size_t>(n) * p, 0.0);
    tau_.assign(std::min(n, p), 0.0);
    w_.assign(w, w + n);
    colscale_.assign(p, 1.0);
    piv_.resize(p);
    for (int k = 0; k < p; ++k) piv_[k] = k;

    // form diag(w) * A and equilibrate columns
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < p; ++k) qr_[i * p + k] = w[i] * A[i * p + k];
    for (int k = 0; k < p; ++k) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += qr_[i * p + k] * qr_[i * p + k];
        s = std::sqrt(s);
        if (s > 0.0) {
            colscale_[k] = 1.0 / s;
            for (int i = 0; i < n; ++i) qr_[i * p + k] *= colscale_[k];
        }
    }

    const int kmax = std::min(n, p);
    for (int k = 0; k < kmax; ++k) {
        // pivot: bring the remaining column of largest norm to position k.
        // Norms are recomputed from scratch; p is small so this is cheap and
        // avoids downdating drift.
        int jbest = k;
        double nbest = -1.0;
        for (int j = k; j < p; ++j) {
            double s = 0.0;
            for (int i = k; i < n; ++i) s += qr_[i * p + j] * qr_[i * p + j];
            if (s > nbest) {
                nbest = s;
                jbest = j;
            }
        }
        if (jbest != k) {
            for (int i = 0; i < n; ++i) std::swap(qr_[i * p + k], qr_[i * p + jbest]);
            std::swap(piv_[k], piv_[jbest]);
        }

        // Householder reflector for column k, v[0] normalized to 1
        double alpha = qr_[k * p + k];
        double nrm2 = 0.0;
        for (int i = k + 1; i < n; ++i) nrm2 += qr_[i * p + k] * qr_[i * p + k];
        const double colnorm = std::sqrt(alpha * alpha + nrm2);
        if (colnorm == 0.0) {
            tau_[k] = 0.0;
            continue;
        }
        const double beta_h = (alpha >= 0.0) ? -colnorm : colnorm;
        tau_[k] = (beta_h - alpha) / beta_h;
        const double inv = 1.0 / (alpha - beta_h);
        for (int i = k + 1; i < n; ++i) qr_[i * p + k] *= inv;
        qr_[k * p + k] = beta_h;

        // apply (I - tau v v^T) to trailing columns
        for (int j = k + 1; j < p; ++j) {
            double dot = qr_[k * p + j];
            for (int i = k + 1; i < n; ++i) dot += qr_[i * p + k] * qr_[i * p + j];
            dot *= tau_[k];
            qr_[k * p + j] -= dot;
            for (int i = k + 1; i < n; ++i) qr_[i * p + j] -= dot * qr_[i * p + k];
        }
    }

    const double r00 = std::fabs(qr_[0]);
    rank_ = 0;
    for (int k = 0; k < kmax; ++k) {
        if (std::fabs(qr_[k * p + k]) >= rank_rtol * r00)
            rank_ = k + 1;
        else
            break;
    }
}

void WlsSolver::solve(const double* b, double* v) const {
    solve_multi(b, 1, v);
}

void WlsSolver::solve_multi(const double* B, int nrhs, double* V) const {
    if (rank_ == 0) {
        for (int r = 0; r < nrhs; ++r)
            for (int k = 0; k < p_; ++k) V[r * p_ + k] = 0.0;
        return;
    }
    std::vector<double> c(n_);
    const int kmax = std::min(n_, p_);
    for (int r = 0; r < nrhs; ++r) {
        const double* b = B + static_cast<size_t>(r) * n_;
        double* v = V + static_cast<size_t>(r) * p_;
        for (int i = 0; i < n_; ++i) c[i] = w_[i] * b[i];
        // c <- Q^T c
        for (int k = 0; k < kmax; ++k) {
            if (tau_[k] == 0.0) continue;
            double dot = c[k];
            for (int i = k + 1; i < n_; ++i) dot += qr_[i * p_ + k] * c[i];
            dot *= tau_[k];
            c[k] -= dot;
            for (int i = k + 1; i < n_; ++i) c[i] -= dot * qr_[i * p_ + k];
        }
        // triangular solve on the leading rank_ x rank_ block
        for (int k = rank_ - 1; k >= 0; --k) {
            double s = c[k];
            for (int j = k + 1; j < rank_; ++j) s -= qr_[k * p_ + j] * c[j];
            c[k] = s / qr_[k * p_ + k];
        }
        for (int k = 0; k < p_; ++k) v[k] = 0.0;
        for (int k = 0; k < rank_; ++k) {
            const int orig = piv_[k];
            v[orig] = colscale_[orig] * c[k];
        }
    }
}

}  // namespace wlseno
