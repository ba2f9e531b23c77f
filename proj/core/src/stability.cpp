#include "wlseno/stability.hpp"

#include <cmath>
#include <stdexcept>

#include "wlseno/solver1d.hpp"
#include "wlseno/wls.hpp"

namespace wlseno {

LinearScheme scheme_from_wls(int n, const std::vector<double>& weights, int degree) {
    if (static_cast<int>(weights.size()) != n)
        throw std::invalid_argument("scheme_from_wls: weight count mismatch");
    const int p = degree + 1;
    if (n < p) throw std::invalid_argument("scheme_from_wls: stencil smaller than basis");
    const int l = n / 2;
    const int r = n - 1 - l;

    // unit-spacing cells [j-1/2, j+1/2], expansion at the center's right face
    std::vector<double> A(static_cast<size_t>(n) * p);
    for (int j = -l; j <= r; ++j)
        interval_moment_row(j - 0.5, j + 0.5, 0.5, degree,
                            A.data() + static_cast<size_t>(j + l) * p);
    WlsSolver ws;
    ws.factor(A.data(), weights.data(), n, p, 1e-12);
    if (ws.rank() < p) throw std::runtime_error("scheme_from_wls: rank-deficient system");

    // face-value weights: v0 of the solution for each unit average
    std::vector<double> cf(n);
    std::vector<double> e(n, 0.0), v(p);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        ws.solve(e.data(), v.data());
        cf[j] = v[0];
        e[j] = 0.0;
    }

    LinearScheme s;
    for (int m = -l - 1; m <= r; ++m) {
        const double a = (m >= -l && m <= r) ? cf[m + l] : 0.0;
        const double b = (m + 1 >= -l && m + 1 <= r) ? cf[m + 1 + l] : 0.0;
        s.offset.push_back(m);
        s.c.push_back(a - b);
    }
    return s;
}

std::complex<double> fourier_symbol(const LinearScheme& s, double theta) {
    const double phi = 2.0 * M_PI - theta;
    std::complex<double> z(0.0, 0.0);
    for (size_t j = 0; j < s.c.size(); ++j)
        z += s.c[j] * std::polar(1.0, s.offset[j] * phi);
    return z;
}

SpectrumPoints discrete_spectrum(const LinearScheme& s, int nsamples) {
    SpectrumPoints out;
    for (int k = 0; k <= nsamples; ++k) {
        const double theta = 2.0 * M_PI * k / nsamples;
        out.param.push_back(theta);
        out.value.push_back(-fourier_symbol(s, theta));
    }
    return out;
}

std::complex<double> rk3_amplification(std::complex<double> z) {
    return 1.0 + z + 0.5 * z * z + z * z * z / 6.0;
}

double max_cfl(const LinearScheme& s, int nsamples, double sigma_max, double tol) {
    std::vector<std::complex<double>> z;
    z.reserve(nsamples + 1);
    for (int k = 0; k <= nsamples; ++k)
        z.push_back(fourier_symbol(s, 2.0 * M_PI * k / nsamples));
    auto stable = [&](double sigma) {
        for (const auto& zk : z)
            if (std::abs(rk3_amplification(-sigma * zk)) > 1.0 + 1e-12) return false;
        return true;
    };
    if (stable(sigma_max)) return sigma_max;
    double lo = 0.0, hi = sigma_max;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (stable(mid) ? lo : hi) = mid;
    }
    return lo;
}

SpectrumPoints stability_boundary(int nsamples) {
    if (nsamples < 3) throw std::invalid_argument("stability_boundary: too few samples");
    SpectrumPoints out;
    const std::complex<double> omega = std::polar(1.0, 2.0 * M_PI / 3.0);
    for (int k = 0; k < nsamples; ++k) {
        const double phi = 2.0 * M_PI * k / (nsamples - 1);
        // substitute z = t - 1: t^3 + 3 t + 2 - 6 e^{i phi} = 0, Cardano with
        // p = 3, q = 2 - 6 e^{i phi}
        const std::complex<double> q = 2.0 - 6.0 * std::polar(1.0, phi);
        const std::complex<double> disc = std::sqrt(0.25 * q * q + 1.0);  // p^3/27 = 1
        std::complex<double> u = -0.5 * q + disc;
        if (std::abs(u) < std::abs(-0.5 * q - disc)) u = -0.5 * q - disc;
        u = std::pow(u, 1.0 / 3.0);
        for (int b = 0; b < 3; ++b) {
            const std::complex<double> ub = u * std::pow(omega, b);
            const std::complex<double> t = ub - 1.0 / ub;  // p/(3u) with p = 3
            out.param.push_back(phi);
            out.value.push_back(t - 1.0);
        }
    }
    return out;
}

}  // namespace wlseno
