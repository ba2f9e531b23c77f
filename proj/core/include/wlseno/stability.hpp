#pragma once

#include <complex>
#include <vector>

namespace wlseno {

// Linear face-difference scheme on a uniform grid:
// u^-_{i+1/2} - u^-_{i-1/2} = sum_j c[j] * ubar_{i + offset[j]}.
// Consistency requires the coefficients to sum to zero.
struct LinearScheme {
    std::vector<int> offset;
    std::vector<double> c;
};

// Solves the uniform-grid (dx = 1) WLS system for each unit right-hand side
// to extract the face-value weights, then forms the flux-difference
// coefficients. `weights` holds the n residual weights in spatial order
// (ascending offset); only their ratios matter.
LinearScheme scheme_from_wls(int n, const std::vector<double>& weights, int degree);

// Fourier symbol with the paper's orientation reversal:
// z(theta) = sum_j c_j e^{i j (2 pi - theta)}
std::complex<double> fourier_symbol(const LinearScheme& s, double theta);

// parameter/value sample sets for CSV emission
struct SpectrumPoints {
    std::vector<double> param;
    std::vector<std::complex<double>> value;
};

// samples of -z(theta) at theta_k = 2 pi k / nsamples, k = 0..nsamples
SpectrumPoints discrete_spectrum(const LinearScheme& s, int nsamples);

// RK3 amplification g(z) = 1 + z + z^2/2 + z^3/6
std::complex<double> rk3_amplification(std::complex<double> z);

// Largest sigma with |g(-sigma z(theta_k))| <= 1 + 1e-12 over all samples,
// by bisection on [0, sigma_max] to the given width. Returns sigma_max when
// the whole bracket is stable and ~0 when none of it is.
double max_cfl(const LinearScheme& s, int nsamples = 4096, double sigma_max = 4.0,
               double tol = 1e-4);

// All three roots of z^3 + 3z^2 + 6z + 6 - 6 e^{i phi} = 0 per phi sample
// (the |g| = 1 level set); param repeats phi for each root.
SpectrumPoints stability_boundary(int nsamples);

}  // namespace wlseno
