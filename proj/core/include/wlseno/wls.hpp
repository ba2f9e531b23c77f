#pragma once

#include <vector>

namespace wlseno {

// Smoothness indicators and residual weights for one stencil.
//
// Member 0 is the stencil's center cell. For j > 0 the indicator is
//   beta[j] = (ubar[j] - ubar[0])^2 + epsilon * h^2
// and the center gets the smallest indicator among its face-adjacent
// members, boosted:
//   beta[0]   = min over face-adjacent j of beta[j]
//   weight[0] = alpha_boost / beta[0],   weight[j] = 1 / beta[j].
// Weights are applied to residual rows as-is (no normalization); the
// normal equations therefore see their squares.
struct IndicatorConfig {
    double epsilon = 1e-2;
    double alpha_boost = 1.5;
};

// ubar: stencil cell averages, center first, length n.
// face_adj: indices (>= 1) of members sharing a face with the center.
// h: local mesh size used to scale epsilon.
// beta, weight: outputs of length n.
void compute_indicators(const double* ubar, int n, const int* face_adj, int n_face_adj,
                        double h, const IndicatorConfig& cfg, double* beta, double* weight);

// Dense weighted least-squares solver,  min_v || diag(w) (A v - b) ||_2.
//
// Columns of diag(w)*A are equilibrated to unit 2-norm, then factored by
// Householder QR with column pivoting. The numerical rank r is the largest
// k with |R_kk| >= rank_rtol * |R_11|; the solve truncates to the leading
// r pivoted columns, which keeps the result finite on rank-deficient
// stencils instead of blowing up.
class WlsSolver {
public:
    // A is n x p, row-major. w has length n and must be positive.
    void factor(const double* A, const double* w, int n, int p, double rank_rtol);

    int rank() const { return rank_; }
    int rows() const { return n_; }
    int cols() const { return p_; }

    // b has length n, v length p. factor() must have been called.
    void solve(const double* b, double* v) const;

    // nrhs right-hand sides stored contiguously (B = nrhs blocks of length n),
    // solutions likewise (V = nrhs blocks of length p).
    void solve_multi(const double* B, int nrhs, double* V) const;

private:
    int n_ = 0, p_ = 0, rank_ = 0;
    std::vector<double> qr_;        // n x p, R above diagonal, Householder vectors below
    std::vector<double> tau_;       // reflector coefficients
    std::vector<double> w_;         // residual weights
    std::vector<double> colscale_;  // equilibration, indexed by original column
    std::vector<int> piv_;          // piv_[k] = original index of pivoted column k
};

}  // namespace wlseno
