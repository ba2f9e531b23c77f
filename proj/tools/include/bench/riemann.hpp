#pragma once

#include <array>

namespace bench {

// Primitive gas state (rho, u, p).
struct GasState {
    double rho = 0.0, u = 0.0, p = 0.0;
};

// Exact solution of the 1-D Riemann problem for an ideal gas: star-state
// pressure by Newton iteration on the pressure function (two-rarefaction
// initial guess, tolerance 1e-12), then self-similar sampling in xi = x/t.
class RiemannSolution {
public:
    RiemannSolution(const GasState& left, const GasState& right, double gamma);

    double pstar() const { return ps_; }
    double ustar() const { return us_; }

    GasState sample(double xi) const;

    // Self-similar wave speeds that bound the smooth pieces, ascending:
    // left head/tail (shock speed repeated when the left wave is a shock),
    // contact, right tail/head.
    std::array<double, 5> wave_speeds() const;

    // Exact average of the density profile at time t over the interval
    // [a, b]: the cell is split at the wave positions and each smooth piece
    // is integrated with a Gauss rule.
    double density_cell_average(double a, double b, double t) const;

private:
    GasState l_, r_;
    double g_;
    double ps_ = 0.0, us_ = 0.0;
};

}  // namespace bench
