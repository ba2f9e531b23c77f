#pragma once

#include <vector>

#include "wlseno/geometry.hpp"
#include "wlseno/mesh.hpp"
#include "wlseno/multiindex.hpp"
#include "wlseno/quadrature.hpp"
#include "wlseno/wls.hpp"

namespace wlseno {

// how vector states are reconstructed
enum class ReconMode { componentwise, characteristic };

struct ReconConfig {
    int degree = 2;
    double epsilon = 1e-2;      // indicator floor, scaled by h^2
    double alpha_boost = 1.5;   // center weight multiplier
    double target_mult = 1.5;   // stencil size over coefficient count
    double rank_rtol = 1e-10;   // relative R-diagonal threshold
    int rule_degree = -1;       // face flux quadrature exactness; -1 means degree
    bool rebalance = false;     // gradient-plane stencil rebalancing (3-D fallback)
    int depth_cap_sixths = 36;  // stencil growth cap
};

// Reusable per-worker scratch for reconstruction fits.
struct ReconScratch {
    WlsSolver ws;
    std::vector<double> beta, weight, ubar, coeffs, row;
};

// Per-cell WLS reconstruction on a simplicial mesh. Construction caches, for
// every cell: the stencil, the least-squares matrix rows (member moments about
// the cell centroid, measure-normalized), the local h scale (mean edge length
// over the stencil), and which stencil members are face-adjacent to the
// center (these feed the center indicator).
class Reconstructor {
public:
    Reconstructor(const AhfMesh& mesh, const ReconConfig& cfg);

    const AhfMesh& mesh() const { return *mesh_; }
    const ReconConfig& config() const { return cfg_; }
    const MultiIndexSet& basis() const { return mis_; }
    int n_coeffs() const { return static_cast<int>(mis_.exps.size()); }

    const Stencil& stencil(int cell) const { return stencils_[cell]; }
    int stencil_size(int cell) const {
        return static_cast<int>(stencils_[cell].members.size());
    }
    const double* matrix_rows(int cell) const { return rows_.data() + row_off_[cell]; }
    double h_scale(int cell) const { return h_[cell]; }
    const std::vector<int>& face_adjacent(int cell) const { return fadj_[cell]; }
    const Point& center(int cell) const { return mesh_->centroid[cell]; }

    // situated stencil averages; out holds ncomp blocks of stencil_size(cell)
    void gather(const double* field, int ncomp, int cell, double* out) const;

    // residual weights from the indicator formula, using the given scalar
    // member averages (length = stencil size, center first)
    void weights(int cell, const double* ubar_scalar, double* w) const;

    // Component-wise fit: one factorization with weights from block wcomp,
    // all components solved against it. ubar_blocks = ncomp blocks of
    // stencil size; coeffs = ncomp blocks of n_coeffs().
    void fit(int cell, const double* ubar_blocks, int ncomp, int wcomp,
             ReconScratch& scratch, double* coeffs) const;

    // factor the cell's system with explicit weights (characteristic path)
    void factor(int cell, const double* w, WlsSolver& ws) const;

    // evaluate one polynomial (n_coeffs() values expanded about center(cell))
    double eval(const double* coeffs, int cell, const Point& x) const;

    // matrix rows / gather for a replacement stencil (rebalancing path)
    std::vector<double> rows_for(int cell, const Stencil& st) const;
    void gather_for(const Stencil& st, const double* field, int ncomp,
                    double* out) const;

private:
    const AhfMesh* mesh_;
    ReconConfig cfg_;
    MultiIndexSet mis_;
    QuadRule rule_;
    std::vector<Stencil> stencils_;
    std::vector<double> rows_;
    std::vector<size_t> row_off_;
    std::vector<double> h_;
    std::vector<std::vector<int>> fadj_;
};

// Own-side face values of one cell's fit: for each local facet the quadrature
// points and the reconstructed state there (nq * ncomp values per facet).
// Retries once with an enlarged stencil if the solve degenerates.
struct FaceValues {
    std::vector<FaceQuadrature> quads;
    std::vector<std::vector<double>> values;
};
FaceValues reconstruct_face_values(const Reconstructor& rec, const double* field,
                                   int ncomp, int cell, ReconScratch& scratch);

// Gradient-plane rebalancing: if any supplied face value falls outside the
// [min, max] of the member averages, grow the ring one increment and return a
// subset of the enlarged ring whose counts on the two sides of the plane
// through the centroid orthogonal to grad differ by at most one. Returns the
// input stencil when the range check passes or the gradient is numerically
// zero.
Stencil rebalance_stencil(const AhfMesh& mesh, int cell, const Stencil& st,
                          const Point& grad, const double* member_avgs,
                          const double* face_values, int nfv);

}  // namespace wlseno
