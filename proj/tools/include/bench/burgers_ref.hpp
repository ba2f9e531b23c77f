#pragma once

#include <vector>

namespace bench {

// Exact solution of u_t + (u^2/2)_x = 0 with u(x,0) = a + b sin(x),
// 2*pi-periodic, traced along characteristics: solves xi + t*u0(xi) = x by
// bisection (monotone for t < 1/b, i.e. before the first shock).
double burgers_exact(double x, double t, double a = 0.3, double b = 0.7);

// cell averages of the exact solution on the given edge list (5-point Gauss)
std::vector<double> burgers_exact_averages(const std::vector<double>& edges, double t,
                                           double a = 0.3, double b = 0.7);

}  // namespace bench
