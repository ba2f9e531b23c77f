#include "wlseno/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace wlseno {

void taylor_basis_row(const MultiIndexSet& mis, const Point& x, const Point& center,
                      double* out) {
    if (mis.degree > 15 || mis.count() > 64)
        throw std::invalid_argument("taylor_basis_row: basis too large");
    const double d0 = x[0] - center[0];
    const double d1 = x[1] - center[1];
    const double d2 = x[2] - center[2];
    // powers up to the set's degree
    double p0[16], p1[16], p2[16];
    p0[0] = p1[0] = p2[0] = 1.0;
    for (int k = 1; k <= mis.degree; ++k) {
        p0[k] = p0[k - 1] * d0;
        p1[k] = p1[k - 1] * d1;
        p2[k] = p2[k - 1] * d2;
    }
    for (int K = 0; K < mis.count(); ++K) {
        const auto& e = mis.exps[K];
        out[K] = p0[e[0]] * p1[e[1]] * p2[e[2]] /
                 (factorial(e[0]) * factorial(e[1]) * factorial(e[2]));
    }
}

void cell_moments_into(const AhfMesh& mesh, int cell, const Point& center, const Point& shift,
                       const MultiIndexSet& mis, const QuadRule& rule, double* out) {
    const int* ev = mesh.elem(cell);
    const int d = mesh.dim;
    // affine map: x(ref) = v0 + J * ref, volume element = d! * |tau| per ref unit
    Point v0 = mesh.xyz[ev[0]];
    for (int i = 0; i < 3; ++i)
        v0[i] += shift[i];
    double J[3][3] = {};
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < 3; ++r)
            J[r][c] = mesh.xyz[ev[c + 1]][r] - mesh.xyz[ev[0]][r];
    const double jac = factorial(d) * mesh.measure[cell];

    const int ncoef = mis.count();
    for (int K = 0; K < ncoef; ++K)
        out[K] = 0.0;
    double row[64];
    for (int q = 0; q < rule.npts; ++q) {
        const double* r = &rule.pts[3 * q];
        Point x = v0;
        for (int c = 0; c < d; ++c)
            for (int i = 0; i < 3; ++i)
                x[i] += J[i][c] * r[c];
        taylor_basis_row(mis, x, center, row);
        const double wq = rule.w[q] * jac;
        for (int K = 0; K < ncoef; ++K)
            out[K] += wq * row[K];
    }
}

MomentTable cell_moments(const AhfMesh& mesh, int cell, const Point& center, int max_degree,
                         const Point& shift) {
    if (cell < 0 || cell >= mesh.n_elems())
        throw std::invalid_argument("cell_moments: cell out of range");
    if (max_degree < 0)
        throw std::invalid_argument("cell_moments: max_degree must be >= 0");
    if (mesh.measure[cell] <= 0.0)
        throw std::runtime_error("cell_moments: degenerate cell");
    MomentTable t;
    t.cell = cell;
    t.center = center;
    t.max_degree = max_degree;
    MultiIndexSet mis = MultiIndexSet::make(mesh.dim, max_degree);
    t.moments.resize(mis.count());
    QuadRule rule = simplex_quadrature(mesh.dim, max_degree);
    cell_moments_into(mesh, cell, center, shift, mis, rule, t.moments.data());
    return t;
}

FaceQuadrature face_quadrature(const AhfMesh& mesh, int cell, int local_facet, int rule_degree) {
    if (cell < 0 || cell >= mesh.n_elems() || local_facet < 0 || local_facet > mesh.dim)
        throw std::invalid_argument("face_quadrature: invalid cell or facet");
    if (rule_degree < 1)
        throw std::invalid_argument("face_quadrature: rule_degree must be >= 1");

    FaceQuadrature fq;
    fq.cell = cell;
    fq.local_facet = local_facet;
    fq.unit_normal = mesh.facet_normal(cell, local_facet);

    int fv[3] = {-1, -1, -1};
    mesh.facet_verts(cell, local_facet, fv);
    if (mesh.dim == 1) {
        fq.points.push_back(mesh.xyz[fv[0]]);
        fq.weights.push_back(1.0);
    } else if (mesh.dim == 2) {
        QuadRule g = segment_gauss(rule_degree);
        const Point a = mesh.xyz[fv[0]], b = mesh.xyz[fv[1]];
        const double len = mesh.facet_measure(cell, local_facet);
        for (int q = 0; q < g.npts; ++q) {
            double t = g.pts[3 * q];
            fq.points.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), 0.0});
            fq.weights.push_back(g.w[q] * len);
        }
    } else {
        QuadRule g = triangle_quadrature_positive(rule_degree);
        const Point a = mesh.xyz[fv[0]], b = mesh.xyz[fv[1]], c = mesh.xyz[fv[2]];
        const double area = mesh.facet_measure(cell, local_facet);
        for (int q = 0; q < g.npts; ++q) {
            double u = g.pts[3 * q], v = g.pts[3 * q + 1];
            Point p;
            for (int i = 0; i < 3; ++i)
                p[i] = a[i] + u * (b[i] - a[i]) + v * (c[i] - a[i]);
            fq.points.push_back(p);
            // rule weights sum to the reference area 1/2
            fq.weights.push_back(g.w[q] * area * 2.0);
        }
    }
    return fq;
}

} // namespace wlseno
