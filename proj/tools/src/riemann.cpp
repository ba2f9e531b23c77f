#include "bench/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bench {

namespace {

// pressure function of one side and its derivative at candidate pressure p
void side_fn(double p, const GasState& s, double g, double c, double& f, double& df) {
    if (p > s.p) {  // shock branch
        const double A = 2.0 / ((g + 1.0) * s.rho);
        const double B = (g - 1.0) / (g + 1.0) * s.p;
        const double rad = std::sqrt(A / (p + B));
        f = (p - s.p) * rad;
        df = rad * (1.0 - (p - s.p) / (2.0 * (B + p)));
    } else {  // rarefaction branch
        f = 2.0 * c / (g - 1.0) * (std::pow(p / s.p, (g - 1.0) / (2.0 * g)) - 1.0);
        df = 1.0 / (s.rho * c) * std::pow(p / s.p, -(g + 1.0) / (2.0 * g));
    }
}

}  // namespace

RiemannSolution::RiemannSolution(const GasState& left, const GasState& right, double gamma)
    : l_(left), r_(right), g_(gamma) {
    if (l_.rho <= 0.0 || l_.p <= 0.0 || r_.rho <= 0.0 || r_.p <= 0.0)
        throw std::invalid_argument("RiemannSolution: inadmissible input state");
    const double cl = std::sqrt(g_ * l_.p / l_.rho);
    const double cr = std::sqrt(g_ * r_.p / r_.rho);
    const double du = r_.u - l_.u;
    if (2.0 * (cl + cr) / (g_ - 1.0) <= du)
        throw std::runtime_error("RiemannSolution: vacuum formation");

    // two-rarefaction guess
    const double ex = (g_ - 1.0) / (2.0 * g_);
    double p = std::pow((cl + cr - 0.5 * (g_ - 1.0) * du) /
                            (cl / std::pow(l_.p, ex) + cr / std::pow(r_.p, ex)),
                        1.0 / ex);
    p = std::max(p, 1e-14);
    for (int it = 0; it < 100; ++it) {
        double fl, dfl, fr, dfr;
        side_fn(p, l_, g_, cl, fl, dfl);
        side_fn(p, r_, g_, cr, fr, dfr);
        double p2 = p - (fl + fr + du) / (dfl + dfr);
        if (p2 < 0.0) p2 = 0.5 * p;
        const bool done = std::abs(p2 - p) < 1e-12 * std::max(1.0, p);
        p = p2;
        if (done) break;
    }
    ps_ = p;
    double fl, dfl, fr, dfr;
    side_fn(ps_, l_, g_, cl, fl, dfl);
    side_fn(ps_, r_, g_, cr, fr, dfr);
    us_ = 0.5 * (l_.u + r_.u) + 0.5 * (fr - fl);
}

GasState RiemannSolution::sample(double xi) const {
    const double cl = std::sqrt(g_ * l_.p / l_.rho);
    const double cr = std::sqrt(g_ * r_.p / r_.rho);
    const double gm = g_ - 1.0, gp = g_ + 1.0;
    if (xi <= us_) {
        if (ps_ > l_.p) {  // left shock
            const double pr = ps_ / l_.p;
            const double rs = l_.rho * ((pr + gm / gp) / (gm / gp * pr + 1.0));
            const double S = l_.u - cl * std::sqrt(gp / (2.0 * g_) * pr + gm / (2.0 * g_));
            return xi < S ? l_ : GasState{rs, us_, ps_};
        }
        const double rs = l_.rho * std::pow(ps_ / l_.p, 1.0 / g_);
        const double cs = cl * std::pow(ps_ / l_.p, gm / (2.0 * g_));
        if (xi < l_.u - cl) return l_;
        if (xi > us_ - cs) return GasState{rs, us_, ps_};
        const double u = 2.0 / gp * (cl + 0.5 * gm * l_.u + xi);
        const double c = 2.0 / gp * (cl + 0.5 * gm * (l_.u - xi));
        return GasState{l_.rho * std::pow(c / cl, 2.0 / gm), u,
                        l_.p * std::pow(c / cl, 2.0 * g_ / gm)};
    }
    if (ps_ > r_.p) {  // right shock
        const double pr = ps_ / r_.p;
        const double rs = r_.rho * ((pr + gm / gp) / (gm / gp * pr + 1.0));
        const double S = r_.u + cr * std::sqrt(gp / (2.0 * g_) * pr + gm / (2.0 * g_));
        return xi > S ? r_ : GasState{rs, us_, ps_};
    }
    const double rs = r_.rho * std::pow(ps_ / r_.p, 1.0 / g_);
    const double cs = cr * std::pow(ps_ / r_.p, gm / (2.0 * g_));
    if (xi > r_.u + cr) return r_;
    if (xi < us_ + cs) return GasState{rs, us_, ps_};
    const double u = 2.0 / gp * (-cr + 0.5 * gm * r_.u + xi);
    const double c = 2.0 / gp * (cr - 0.5 * gm * (r_.u - xi));
    return GasState{r_.rho * std::pow(c / cr, 2.0 / gm), u,
                    r_.p * std::pow(c / cr, 2.0 * g_ / gm)};
}

std::array<double, 5> RiemannSolution::wave_speeds() const {
    const double cl = std::sqrt(g_ * l_.p / l_.rho);
    const double cr = std::sqrt(g_ * r_.p / r_.rho);
    const double gm = g_ - 1.0, gp = g_ + 1.0;
    double lh, lt, rh, rt;
    if (ps_ > l_.p) {
        lh = lt = l_.u - cl * std::sqrt(gp / (2.0 * g_) * ps_ / l_.p + gm / (2.0 * g_));
    } else {
        lh = l_.u - cl;
        lt = us_ - cl * std::pow(ps_ / l_.p, gm / (2.0 * g_));
    }
    if (ps_ > r_.p) {
        rh = rt = r_.u + cr * std::sqrt(gp / (2.0 * g_) * ps_ / r_.p + gm / (2.0 * g_));
    } else {
        rt = us_ + cr * std::pow(ps_ / r_.p, gm / (2.0 * g_));
        rh = r_.u + cr;
    }
    return {lh, lt, us_, rt, rh};
}

double RiemannSolution::density_cell_average(double a, double b, double t) const {
    if (!(b > a)) throw std::invalid_argument("density_cell_average: empty interval");
    if (t <= 0.0) {  // initial data
        if (b <= 0.0) return l_.rho;
        if (a >= 0.0) return r_.rho;
        return (l_.rho * (0.0 - a) + r_.rho * (b - 0.0)) / (b - a);
    }
    // split at wave positions, then 5-point Gauss per smooth piece
    std::array<double, 7> cut{a, b, b, b, b, b, b};
    int nc = 1;
    for (double s : wave_speeds()) {
        const double x = s * t;
        if (x > a && x < b) cut[nc++] = x;
    }
    cut[nc++] = b;
    std::sort(cut.begin(), cut.begin() + nc);
    static const double gx[5] = {-0.906179845938664, -0.538469310105683, 0.0,
                                 0.538469310105683, 0.906179845938664};
    static const double gw[5] = {0.236926885056189, 0.478628670499366, 0.568888888888889,
                                 0.478628670499366, 0.236926885056189};
    double acc = 0.0;
    for (int s = 0; s + 1 < nc; ++s) {
        const double m = 0.5 * (cut[s] + cut[s + 1]);
        const double hw = 0.5 * (cut[s + 1] - cut[s]);
        if (hw <= 0.0) continue;
        for (int q = 0; q < 5; ++q)
            acc += hw * gw[q] * sample((m + hw * gx[q]) / t).rho;
    }
    return acc / (b - a);
}

}  // namespace bench
