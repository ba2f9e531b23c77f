#include "wlseno/quadrature.hpp"
#include "wlseno/multiindex.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace wlseno {

int n_poly_coeffs(int dim, int degree) {
    // binom(degree + dim, dim)
    std::int64_t num = 1, den = 1;
    for (int i = 1; i <= dim; ++i) {
        num *= degree + i;
        den *= i;
    }
    return static_cast<int>(num / den);
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

MultiIndexSet MultiIndexSet::make(int dim, int degree) {
    MultiIndexSet s;
    s.dim = dim;
    s.degree = degree;
    for (int t = 0; t <= degree; ++t) {
        // graded lex, first exponent decreasing
        if (dim == 1) {
            s.exps.push_back({t, 0, 0});
        } else if (dim == 2) {
            for (int a = t; a >= 0; --a)
                s.exps.push_back({a, t - a, 0});
        } else {
            for (int a = t; a >= 0; --a)
                for (int b = t - a; b >= 0; --b)
                    s.exps.push_back({a, b, t - a - b});
        }
    }
    return s;
}

namespace {

// Enumerate multi-indices beta of length d+1 with |beta| = total.
void enum_bary(int nf, int total, std::array<int, 4>& beta, int pos,
               const std::function<void(const std::array<int, 4>&)>& fn) {
    if (pos == nf - 1) {
        beta[pos] = total;
        fn(beta);
        return;
    }
    for (int v = total; v >= 0; --v) {
        beta[pos] = v;
        enum_bary(nf, total - v, beta, pos + 1, fn);
    }
}

} // namespace

QuadRule simplex_quadrature(int dim, int min_degree) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("simplex_quadrature: dim must be 1..3");
    int k = 0;
    while (2 * k + 1 < min_degree)
        ++k;
    const int s = 2 * k + 1;
    const int d = dim;

    QuadRule rule;
    rule.dim = dim;
    rule.exact_degree = s;

    double pow2 = std::ldexp(1.0, -2 * k); // 2^{-2k}
    for (int i = 0; i <= k; ++i) {
        const double denom = s + d - 2.0 * i;
        double wi = pow2 * std::pow(denom, s) / (factorial(i) * factorial(s + d - i));
        if (i % 2)
            wi = -wi;
        std::array<int, 4> beta{};
        enum_bary(d + 1, k - i, beta, 0, [&](const std::array<int, 4>& b) {
            // barycentric (2b+1)/denom; reference Cartesian drops coordinate 0
            rule.pts.push_back((2.0 * b[1] + 1.0) / denom);
            rule.pts.push_back(d >= 2 ? (2.0 * b[2] + 1.0) / denom : 0.0);
            rule.pts.push_back(d >= 3 ? (2.0 * b[3] + 1.0) / denom : 0.0);
            rule.w.push_back(wi);
        });
    }
    rule.npts = static_cast<int>(rule.w.size());
    return rule;
}

QuadRule segment_gauss(int min_degree) {
    const int n = (min_degree + 2) / 2; // exactness 2n-1 >= min_degree
    QuadRule rule;
    rule.dim = 1;
    rule.npts = n;
    rule.exact_degree = 2 * n - 1;
    // Newton on Legendre P_n over [-1,1], then map to [0,1].
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
            double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.pts.push_back(0.5 * (x + 1.0));
        rule.pts.push_back(0.0);
        rule.pts.push_back(0.0);
        rule.w.push_back(0.5 * w);
    }
    return rule;
}

namespace {

void orbit3(QuadRule& r, double a, double w) {
    // barycentric (a, a, 1-2a) permutations; reference coords (x,y) = (b1, b2)
    const double c = 1.0 - 2.0 * a;
    const double pts[3][2] = {{a, c}, {c, a}, {a, a}};
    for (auto& p : pts) {
        r.pts.push_back(p[0]);
        r.pts.push_back(p[1]);
        r.pts.push_back(0.0);
        r.w.push_back(w * 0.5);
    }
}

void orbit6(QuadRule& r, double a, double b, double w) {
    const double c = 1.0 - a - b;
    const double pts[6][2] = {{a, b}, {b, a}, {a, c}, {c, a}, {b, c}, {c, b}};
    for (auto& p : pts) {
        r.pts.push_back(p[0]);
        r.pts.push_back(p[1]);
        r.pts.push_back(0.0);
        r.w.push_back(w * 0.5);
    }
}

} // namespace

QuadRule triangle_quadrature_positive(int min_degree) {
    QuadRule r;
    r.dim = 2;
    if (min_degree <= 1) {
        r.exact_degree = 1;
        r.pts = {1.0 / 3.0, 1.0 / 3.0, 0.0};
        r.w = {0.5};
    } else if (min_degree <= 2) {
        // edge-midpoint rule
        r.exact_degree = 2;
        r.pts = {0.5, 0.5, 0.0, 0.0, 0.5, 0.0, 0.5, 0.0, 0.0};
        r.w = {0.5 / 3.0, 0.5 / 3.0, 0.5 / 3.0};
    } else if (min_degree <= 4) {
        r.exact_degree = 4;
        orbit3(r, 0.445948490915965, 0.223381589678011);
        orbit3(r, 0.091576213509771, 0.109951743655322);
    } else if (min_degree <= 5) {
        r.exact_degree = 5;
        r.pts = {1.0 / 3.0, 1.0 / 3.0, 0.0};
        r.w = {0.225 * 0.5};
        orbit3(r, 0.470142064105115, 0.132394152788506);
        orbit3(r, 0.101286507323456, 0.125939180544827);
    } else if (min_degree <= 6) {
        r.exact_degree = 6;
        orbit3(r, 0.249286745170910, 0.116786275726379);
        orbit3(r, 0.063089014491502, 0.050844906370207);
        orbit6(r, 0.310352451033785, 0.053145049844816, 0.082851075618374);
    } else {
        throw std::invalid_argument("triangle_quadrature_positive: degree > 6 unsupported");
    }
    r.npts = static_cast<int>(r.w.size());
    return r;
}

} // namespace wlseno
