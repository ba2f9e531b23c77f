#pragma once

#include <vector>

namespace wlseno {

// Quadrature rule on a reference domain.
// For simplex rules the points are reference Cartesian coordinates
// (x_1..x_d with x_i >= 0, sum <= 1) stored padded to 3 doubles; the
// weights sum to the reference simplex measure 1/d!.
// For segment rules the points are on [0,1] (one coordinate used) and the
// weights sum to 1.
struct QuadRule {
    int dim = 0;
    int npts = 0;
    int exact_degree = 0;
    std::vector<double> pts; // npts * 3
    std::vector<double> w;   // npts
};

// Grundmann-Moller rule of the smallest odd strength s = 2k+1 >= min_degree
// on the d-simplex. Exact for all polynomials of total degree <= s.
// Weights alternate in sign for k >= 1; do not use where positive weights
// are required.
QuadRule simplex_quadrature(int dim, int min_degree);

// Gauss-Legendre on [0,1] with ceil((min_degree+1)/2) points.
QuadRule segment_gauss(int min_degree);

// Positive-weight symmetric rules on the reference triangle, for facet flux
// quadrature. Supported up to degree 6.
QuadRule triangle_quadrature_positive(int min_degree);

} // namespace wlseno
