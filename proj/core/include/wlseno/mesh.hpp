#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace wlseno {

using Point = std::array<double, 3>;

// Boundary facet tags. Fixture meshes follow the axis convention below;
// PeriodicPair specs translate lo-tagged facets onto hi-tagged ones.
inline constexpr int tag_none = 0;
inline constexpr int tag_xlo = 1, tag_xhi = 2;
inline constexpr int tag_ylo = 3, tag_yhi = 4;
inline constexpr int tag_zlo = 5, tag_zhi = 6;
inline constexpr int tag_reflective = 7;

struct PeriodicPair {
    int tag_lo = 0;
    int tag_hi = 0;
    Point shift{}; // added to lo-side coordinates to land on the hi side
};

// A stencil member as seen from the stencil's center cell: the cell's
// vertex coordinates must be translated by `shift` (nonzero only when the
// member was reached across a periodic seam).
struct SituatedCell {
    int cell = -1;
    Point shift{};

    friend bool operator==(const SituatedCell& a, const SituatedCell& b) {
        return a.cell == b.cell && a.shift == b.shift;
    }
};

struct Stencil {
    int center = -1;
    std::vector<SituatedCell> members; // center first, then (cell id, shift) ascending
    int depth_sixths = 0;              // ring depth in sixths (1/2 = 3, 1/3 = 2, 1 = 6)
    bool saturated = false;            // ring growth hit the cap or the whole mesh
};

// Array-based half-facet mesh for interval (1-D), triangle (2-D), and
// tetrahedron (3-D) elements. Half-facet id = elem * (dim+1) + local_facet,
// where local facet f is the facet opposite local vertex f.
//
// Invariants established by build():
//   - sibling is an involution on interior half-facets; boundary hfs have
//     sibling -1 (periodic-linked pairs count as interior and carry a shift),
//   - every element has positive measure (orientation fixed up at build),
//   - anchor(v) is a half-facet of an element incident to v.
struct AhfMesh {
    int dim = 0;
    std::vector<Point> xyz;
    std::vector<int> conn;     // ne * (dim+1) vertex ids
    std::vector<int> sibling;  // per half-facet; -1 on boundary
    std::vector<int> anchor;   // per vertex: an incident half-facet id, -1 if unused
    std::vector<int> facet_tag;               // per half-facet; tag_none when interior/untagged
    std::vector<Point> facet_shift;           // per half-facet; nonzero only on periodic links
    std::vector<std::array<std::int8_t, 3>> facet_vperm; // periodic links: local facet-vertex i
                                                         // on this side matches facet-vertex
                                                         // facet_vperm[i] on the sibling facet
    std::vector<double> measure;   // |tau|
    std::vector<Point> centroid;

    int n_verts() const { return static_cast<int>(xyz.size()); }
    int n_elems() const { return static_cast<int>(measure.size()); }
    int nv_per_elem() const { return dim + 1; }
    int n_half_facets() const { return static_cast<int>(sibling.size()); }

    const int* elem(int e) const { return conn.data() + e * (dim + 1); }
    int hf_id(int e, int f) const { return e * (dim + 1) + f; }
    int hf_elem(int h) const { return h / (dim + 1); }
    int hf_local(int h) const { return h % (dim + 1); }

    // Vertex ids of local facet f of element e (the dim vertices != local vertex f),
    // in ascending-local-index order.
    void facet_verts(int e, int f, int out[3]) const;

    // Geometry of a facet: measure (1 for 1-D points), centroid, and the
    // outward unit normal of the owning element.
    double facet_measure(int e, int f) const;
    Point facet_centroid(int e, int f) const;
    Point facet_normal(int e, int f) const;

    // Largest inscribed-sphere radius: d * |tau| / (total facet measure).
    double inradius(int e) const;
    double max_edge_length(int e) const;
    double mean_edge_length(int e) const;
};

// Builds the half-facet structure via facet hashing. Orientation of each
// element is corrected to positive measure by swapping two vertices when
// needed. boundary_tags maps half-facet ids (elem*(dim+1)+local) to tags;
// untagged boundary facets get tag_none. Periodic pairs are then linked as
// siblings with shift records and facet-vertex correspondences; every
// lo-tagged facet must match exactly one hi-tagged facet under the shift.
// Throws std::runtime_error on non-manifold facets, dangling vertex ids,
// degenerate elements, or unmatched periodic facets.
AhfMesh build_mesh(int dim, std::vector<Point> xyz, std::vector<int> conn,
                   const std::vector<std::pair<int, int>>& boundary_tags = {},
                   const std::vector<PeriodicPair>& periodic = {});

// Fractional-ring neighborhood of a cell. Depth is given in sixths:
// 1-D supports whole rings (6, 12, ...) = that many cells on each side where
// available; 2-D supports halves (3 = edge-adjacent, 6 = vertex-adjacent, ...);
// 3-D supports thirds (2 = face-adjacent, 4 = edge-adjacent, 6 = vertex-
// adjacent, ...). Members are deduplicated as (cell, shift) pairs so periodic
// wrap-around on small meshes keeps distinct copies distinct.
Stencil ring_neighbors(const AhfMesh& mesh, int cell, int depth_sixths);

// Smallest ring whose member count reaches target_mult * n_poly_coeffs(dim,
// degree), growing by the dimension's increment; the full final ring is kept
// even when it overshoots twice the coefficient count. Saturation (cap or
// whole mesh reached first) is flagged on the result, not fatal.
// 1-D uses the explicit odd cell count 2*floor(0.75*m)+1 centered on the cell
// (shifted inward at non-periodic boundaries).
Stencil stencil_for_degree(const AhfMesh& mesh, int cell, int degree,
                           double target_mult = 1.5, int depth_cap_sixths = 36);

// 1-D window selector: n cells total, l of them to the left of `cell`.
// At non-periodic boundaries the window shifts to stay inside the grid.
Stencil line_stencil(const AhfMesh& mesh, int cell, int left, int n);

} // namespace wlseno
