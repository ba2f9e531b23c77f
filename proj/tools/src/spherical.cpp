#include "bench/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wlseno/laws.hpp"
#include "wlseno/solver1d.hpp"

namespace bench {

using wlseno::BoundaryMode1D;
using wlseno::Euler;
using wlseno::Grid1D;
using wlseno::ReconMode;
using wlseno::Solver1D;
using wlseno::SolverConfig1D;

RadialProfile spherical_reference(const SphericalSetup& setup) {
    if (setup.dim != 2 && setup.dim != 3)
        throw std::invalid_argument("spherical_reference: dim must be 2 or 3");
    if (setup.fine_n < 16)
        throw std::invalid_argument("spherical_reference: fine_n too small");

    const int n = setup.fine_n;
    const double dr = setup.rmax / n;
    Grid1D grid;
    grid.edge.resize(n + 1);
    for (int j = 0; j <= n; ++j) grid.edge[j] = 0.5 * dr + j * dr;

    Euler law(1, setup.gamma);
    const double gm1 = setup.gamma - 1.0;
    auto conserved = [&](const std::array<double, 3>& prim, double* u) {
        u[0] = prim[0];
        u[1] = prim[0] * prim[1];
        u[2] = prim[2] / gm1 + 0.5 * prim[0] * prim[1] * prim[1];
    };
    double uin[3], uout[3];
    conserved(setup.inner, uin);
    conserved(setup.outer, uout);

    SolverConfig1D cfg;
    cfg.recon.degree = setup.degree;
    cfg.boundary = BoundaryMode1D::reflective;
    cfg.mode = ReconMode::characteristic;
    const double geom = static_cast<double>(setup.dim - 1);
    cfg.source = [&law, geom](const double* u, double x, double* s) {
        const double p = law.pressure(u);
        const double vel = u[1] / u[0];
        const double f = -geom / x;
        s[0] = f * u[1];
        s[1] = f * u[1] * vel;
        s[2] = f * vel * (u[2] + p);
    };
    Solver1D solver(grid, law, cfg);

    // exact averages of the two-state initial condition
    std::vector<double> u(static_cast<std::size_t>(n) * 3);
    for (int i = 0; i < n; ++i) {
        const double a = grid.edge[i], b = grid.edge[i + 1];
        const double fin = std::clamp((setup.r_jump - a) / (b - a), 0.0, 1.0);
        for (int c = 0; c < 3; ++c)
            u[3 * i + c] = fin * uin[c] + (1.0 - fin) * uout[c];
    }

    double t = 0.0;
    int steps = 0;
    while (t < setup.t_final - 1e-14) {
        double dt = solver.stable_dt(u.data(), setup.cfl);
        dt = std::min(dt, setup.t_final - t);
        solver.rk3_step(u.data(), dt);
        t += dt;
        ++steps;
        if (!solver.field_admissible(u.data()))
            throw std::runtime_error("spherical_reference: inadmissible state");
    }

    RadialProfile prof;
    prof.rmax = setup.rmax;
    prof.steps = steps;
    prof.r.resize(n);
    prof.rho.resize(n);
    for (int i = 0; i < n; ++i) {
        prof.r[i] = grid.center(i);
        prof.rho[i] = u[3 * i];
    }
    return prof;
}

double profile_density_at(const RadialProfile& p, double r) {
    if (p.r.empty()) throw std::runtime_error("profile_density_at: empty profile");
    if (r <= p.r.front()) return p.rho.front();
    if (r >= p.r.back()) return p.rho.back();
    const auto it = std::upper_bound(p.r.begin(), p.r.end(), r);
    const std::size_t k = static_cast<std::size_t>(it - p.r.begin());
    const double r0 = p.r[k - 1], r1 = p.r[k];
    const double w = (r - r0) / (r1 - r0);
    return (1.0 - w) * p.rho[k - 1] + w * p.rho[k];
}

}  // namespace bench
