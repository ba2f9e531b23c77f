#pragma once

#include <functional>
#include <vector>

#include "wlseno/laws.hpp"
#include "wlseno/mesh.hpp"
#include "wlseno/reconstruct.hpp"

namespace wlseno {

struct MeshSolverConfig {
    ReconConfig recon;
    ReconMode mode = ReconMode::componentwise;
    bool local_lf = false;
    bool positivity_fallback = true;
    double dt_cap = 1e30;
};

// Finite-volume solver on a simplicial AhfMesh. Faces are built once, each
// carrying shared quadrature points and per-side basis evaluation rows, so a
// face's two traces are sampled at identical physical locations and the LF
// flux telescopes exactly. Untagged boundary facets are an error; tagged ones
// are treated as reflecting walls (periodic seams are already siblings).
class MeshSolver {
public:
    MeshSolver(const AhfMesh& mesh, const ConservationLaw& law,
               const MeshSolverConfig& cfg);

    const AhfMesh& mesh() const { return *mesh_; }
    const ConservationLaw& law() const { return *law_; }
    const Reconstructor& recon() const { return rec_; }
    int ncomp() const { return law_->ncomp(); }

    // d ubar/dt; u and out are n_elems * ncomp
    void rhs(const double* u, double* out);

    // sigma * min over cells of inradius / max wave speed
    double stable_dt(const double* u, double sigma) const;

    void rk3_step(double* u, double dt);

    // cell averages of a pointwise function via a volume rule of the given
    // exactness (2-D rules are positive; 3-D rules of degree > 1 carry signed
    // weights, so prefer the subdivided variant for discontinuous data)
    void project_ic(const std::function<void(const Point&, double*)>& ic, int rule_degree,
                    double* u) const;

    // centroid sampling on `levels` rounds of uniform simplex refinement;
    // positive weights, first-order accurate, robust across jumps
    void project_ic_subdivided(const std::function<void(const Point&, double*)>& ic,
                               int levels, double* u) const;

    long positivity_fallbacks() const { return fallback_count_; }
    bool field_admissible(const double* u) const;

    // rebalancing diagnostics (active when recon.rebalance is set)
    long rebalance_count() const { return rebalance_count_; }

private:
    struct MFace {
        int cell_l = -1, cell_r = -1;  // cell_r < 0: reflecting wall
        Point normal{};                // unit, oriented l -> r (outward at walls)
        std::vector<Point> qpts;       // physical points in the owner frame
        std::vector<double> qw;        // weights, sum = facet measure
        std::vector<double> Bl, Br;    // nq x p basis rows per side
    };

    void fit_all(const double* u);
    void rebalance_cell(int e, const double* u, double* co);
    void face_traces_char(const MFace& fc, int side, const double* u, double* traces);

    const AhfMesh* mesh_;
    const ConservationLaw* law_;
    MeshSolverConfig cfg_;
    Reconstructor rec_;
    std::vector<MFace> faces_;
    std::vector<std::vector<std::pair<int, int>>> cell_faces_;  // rebalancing only
    std::vector<double> coeffs_;  // componentwise: per cell, ncomp blocks of p
    ReconScratch scratch_;
    std::vector<double> eig_, char_ub_, char_co_, tr_;
    std::vector<double> k1_, k2_, r_;
    long fallback_count_ = 0;
    long rebalance_count_ = 0;
};

}  // namespace wlseno
