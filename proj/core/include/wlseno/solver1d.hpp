#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wlseno/laws.hpp"
#include "wlseno/reconstruct.hpp"

namespace wlseno {

// 1-D grid as an ascending edge list; cell i spans [edge[i], edge[i+1]].
struct Grid1D {
    std::vector<double> edge;

    int n() const { return static_cast<int>(edge.size()) - 1; }
    double dx(int i) const { return edge[i + 1] - edge[i]; }
    double center(int i) const { return 0.5 * (edge[i] + edge[i + 1]); }
    double length() const { return edge.back() - edge.front(); }

    static Grid1D uniform(double a, double b, int n);
    // uniform grid with interior nodes jittered by up to amp_frac * dx
    static Grid1D perturbed(double a, double b, int n, double amp_frac, uint64_t seed);
};

// moment row of the interval [a, b] about x0:
// out[k] = integral (x - x0)^k dx / (k! * (b - a)),  k = 0..degree
void interval_moment_row(double a, double b, double x0, int degree, double* out);

enum class BoundaryMode1D { periodic, reflective };

// Scalar face traces on a line grid, one WLS fit per cell: um[i] is the trace
// at cell i's right face, up[i] the same fit evaluated at its left face.
// Windows hold stencil_n cells centered on the cell; non-periodic grids clamp
// the window inside the domain (one-sided near the ends), periodic grids wrap
// with coordinate unwrapping. indicator_scalar, when given, replaces ubar as
// the field driving the non-smoothness weights.
void line_face_reconstruction(const Grid1D& grid, const double* ubar, int degree,
                              int stencil_n, bool periodic, const IndicatorConfig& ind,
                              double rank_rtol, double* um, double* up,
                              const double* indicator_scalar = nullptr);

struct SolverConfig1D {
    ReconConfig recon;                // degree, epsilon, alpha_boost, rank_rtol used
    int stencil_n = -1;               // cells per stencil; -1 derives from degree
    BoundaryMode1D boundary = BoundaryMode1D::periodic;
    ReconMode mode = ReconMode::componentwise;
    bool local_lf = false;            // per-face alpha instead of the field max
    bool positivity_fallback = true;  // drop face values to the cell average when
                                      // they leave the admissible set
    double dt_cap = 1e30;
    // optional geometric source s(u, x) added to du/dt
    std::function<void(const double* u, double x, double* s)> source;
};

// Finite-volume line solver. Reconstruction expands each cell's polynomial at
// its right face and evaluates the same fit at the left face; ghost cells
// (wrap-around or wall mirror) pad the stencils near the ends.
class Solver1D {
public:
    Solver1D(const Grid1D& grid, const ConservationLaw& law, const SolverConfig1D& cfg);

    const Grid1D& grid() const { return grid_; }
    const ConservationLaw& law() const { return *law_; }
    int ncomp() const { return law_->ncomp(); }
    int stencil_n() const { return nst_; }

    // Face traces from the current averages. uminus/uplus have (n+1) * ncomp
    // entries; index j is the face at edge[j], uminus[j] from cell j-1 and
    // uplus[j] from cell j (walls substitute the mirror state, periodic wraps).
    void face_states(const double* u, double* uminus, double* uplus);

    // d ubar/dt; u and out are n * ncomp
    void rhs(const double* u, double* out);

    double stable_dt(const double* u, double sigma) const;

    // in-place third-order TVD Runge-Kutta step
    void rk3_step(double* u, double dt);

    // project a pointwise initial condition to cell averages (Gauss rule
    // exact to the given degree)
    void project_ic(const std::function<void(double x, double* u)>& ic, int rule_degree,
                    double* u) const;

    long positivity_fallbacks() const { return fallback_count_; }
    bool field_admissible(const double* u) const;

private:
    void fill_extended(const double* u);
    void reconstruct_cell(int i, double* uminus_right, double* uplus_left);

    Grid1D grid_;
    const ConservationLaw* law_;
    SolverConfig1D cfg_;
    int nst_ = 0;       // stencil cell count
    int nl_ = 0;        // members left of the center
    int p_ = 0;         // polynomial coefficients
    int g_ = 0;         // ghost depth per side
    std::vector<int> off_;        // member order as offsets from the center
    std::vector<double> xedge_;   // extended edges, (n + 2g + 1)
    std::vector<double> rows_;    // per real cell: nst x p about the right face
    std::vector<double> eval_l_;  // per real cell: left-face evaluation row
    std::vector<double> ue_;      // extended averages
    std::vector<double> um_, up_, fluxes_, k1_, k2_, r_;
    WlsSolver ws_;
    std::vector<double> sb_, sw_, sub_, sco_, proj_, char_r_, char_l_;
    long fallback_count_ = 0;
};

}  // namespace wlseno
