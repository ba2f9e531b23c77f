#pragma once

#include "wlseno/mesh.hpp"
#include "wlseno/multiindex.hpp"
#include "wlseno/quadrature.hpp"

namespace wlseno {

// Scaled monomial moments of one cell about an expansion point:
//   moments[K] = (1 / prod k_i!) * integral over the cell of
//                prod (x_i - center_i)^{k_i} dV
// for every multi-index K of total degree <= max_degree, in MultiIndexSet
// order. Entry 0 equals the cell measure. Dividing a row by the cell measure
// yields the cell-average coefficients multiplying the Taylor derivatives
// v_K = D^K u(center).
struct MomentTable {
    int cell = -1;
    Point center{};
    int max_degree = 0;
    std::vector<double> moments;
};

// Moments are evaluated by mapping a simplex quadrature rule (exact to
// max_degree) onto the cell, so every entry is exact to rounding.
// `shift` translates the cell's vertices before integration; stencil members
// reached across periodic seams pass their situation shift here.
MomentTable cell_moments(const AhfMesh& mesh, int cell, const Point& center, int max_degree,
                         const Point& shift = {});

// Same, with a caller-provided rule and multi-index set (hot path for
// assembling many rows against one basis).
void cell_moments_into(const AhfMesh& mesh, int cell, const Point& center, const Point& shift,
                       const MultiIndexSet& mis, const QuadRule& rule, double* out);

// Quadrature points/weights on one facet plus the owning cell's outward unit
// normal. Weights sum to the facet measure (1-D: the single endpoint with
// weight 1). Segment facets use Gauss rules; triangle facets use positive
// symmetric rules.
struct FaceQuadrature {
    int cell = -1;
    int local_facet = -1;
    Point unit_normal{};
    std::vector<Point> points;
    std::vector<double> weights;
};

FaceQuadrature face_quadrature(const AhfMesh& mesh, int cell, int local_facet, int rule_degree);

// Taylor basis row at a point: out[K] = prod (x_i - center_i)^{k_i} / prod k_i!.
// A reconstruction polynomial with coefficient vector v evaluates to
// dot(out, v).
void taylor_basis_row(const MultiIndexSet& mis, const Point& x, const Point& center, double* out);

} // namespace wlseno
