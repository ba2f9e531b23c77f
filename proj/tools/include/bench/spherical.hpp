#pragma once

#include <array>
#include <vector>

namespace bench {

// radially symmetric gas solution sampled at cell centers
struct RadialProfile {
    std::vector<double> r;
    std::vector<double> rho;
    double rmax = 0.0;
    int steps = 0;
};

// Two-state radial Riemann setup: (rho, u_r, p) inside and outside r_jump.
// dim selects the cylindrical (2) or spherical (3) geometric source.
struct SphericalSetup {
    int dim = 2;
    double gamma = 1.4;
    std::array<double, 3> inner{1.0, 0.0, 1.0};
    std::array<double, 3> outer{0.125, 0.0, 0.1};
    double r_jump = 0.2;
    double t_final = 0.1;
    double rmax = 1.0;
    int fine_n = 4000;
    double cfl = 1.2;
    int degree = 4;
};

// High-resolution radial reference run. The grid keeps the first face at
// dr/2 (reflective) so the geometric source 1/r stays bounded; the state jump
// is averaged exactly into the cell that straddles it.
RadialProfile spherical_reference(const SphericalSetup& setup);

// piecewise-linear density lookup, clamped at the profile ends
double profile_density_at(const RadialProfile& p, double r);

}  // namespace bench
