#include "wlseno/laws.hpp"

#include <cmath>
#include <stdexcept>

namespace wlseno {

void ConservationLaw::eigen(const double*, const Point&, double*, double*, double*) const {
    throw std::logic_error("this law has no characteristic decomposition");
}

void ConservationLaw::mirror_state(const double* u, const Point&, double* ghost) const {
    for (int c = 0; c < ncomp(); ++c) ghost[c] = u[c];
}

void Advection::flux(const double* u, const Point& n, double* f) const {
    double vn = 0.0;
    for (int k = 0; k < dim_; ++k) vn += vel_[k] * n[k];
    f[0] = vn * u[0];
}

double Advection::max_speed(const double*) const {
    double s = 0.0;
    for (int k = 0; k < dim_; ++k) s += vel_[k] * vel_[k];
    return std::sqrt(s);
}

double Advection::normal_speed(const double*, const Point& n) const {
    double vn = 0.0;
    for (int k = 0; k < dim_; ++k) vn += vel_[k] * n[k];
    return std::fabs(vn);
}

void Burgers::flux(const double* u, const Point& n, double* f) const {
    double s = 0.0;
    for (int k = 0; k < dim_; ++k) s += n[k];
    f[0] = 0.5 * u[0] * u[0] * s;
}

double Burgers::max_speed(const double* u) const {
    return std::fabs(u[0]) * std::sqrt(static_cast<double>(dim_));
}

double Burgers::normal_speed(const double* u, const Point& n) const {
    double s = 0.0;
    for (int k = 0; k < dim_; ++k) s += n[k];
    return std::fabs(u[0] * s);
}

double Euler::pressure(const double* u) const {
    double ke = 0.0;
    for (int k = 0; k < dim_; ++k) ke += u[1 + k] * u[1 + k];
    ke *= 0.5 / u[0];
    return (gamma_ - 1.0) * (u[dim_ + 1] - ke);
}

double Euler::sound_speed(const double* u) const {
    return std::sqrt(gamma_ * pressure(u) / u[0]);
}

void Euler::flux(const double* u, const Point& n, double* f) const {
    const double p = pressure(u);
    double mn = 0.0;
    for (int k = 0; k < dim_; ++k) mn += u[1 + k] * n[k];
    const double vn = mn / u[0];
    f[0] = mn;
    for (int k = 0; k < dim_; ++k) f[1 + k] = u[1 + k] * vn + p * n[k];
    f[dim_ + 1] = vn * (u[dim_ + 1] + p);
}

double Euler::max_speed(const double* u) const {
    double ke2 = 0.0;
    for (int k = 0; k < dim_; ++k) ke2 += u[1 + k] * u[1 + k];
    return std::sqrt(ke2) / u[0] + sound_speed(u);
}

double Euler::normal_speed(const double* u, const Point& n) const {
    double mn = 0.0;
    for (int k = 0; k < dim_; ++k) mn += u[1 + k] * n[k];
    return std::fabs(mn / u[0]) + sound_speed(u);
}

bool Euler::admissible(const double* u) const {
    return u[0] > 0.0 && pressure(u) > 0.0;
}

void Euler::mirror_state(const double* u, const Point& n, double* ghost) const {
    ghost[0] = u[0];
    ghost[dim_ + 1] = u[dim_ + 1];
    double mn = 0.0;
    for (int k = 0; k < dim_; ++k) mn += u[1 + k] * n[k];
    for (int k = 0; k < dim_; ++k) ghost[1 + k] = u[1 + k] - 2.0 * mn * n[k];
}

void tangent_frame(const Point& n, Point& t1, Point& t2) {
    int kmin = 0;
    for (int k = 1; k < 3; ++k)
        if (std::fabs(n[k]) < std::fabs(n[kmin])) kmin = k;
    Point e{0.0, 0.0, 0.0};
    e[kmin] = 1.0;
    double dot = e[0] * n[0] + e[1] * n[1] + e[2] * n[2];
    double nrm = 0.0;
    for (int k = 0; k < 3; ++k) {
        t1[k] = e[k] - dot * n[k];
        nrm += t1[k] * t1[k];
    }
    nrm = std::sqrt(nrm);
    for (int k = 0; k < 3; ++k) t1[k] /= nrm;
    t2[0] = n[1] * t1[2] - n[2] * t1[1];
    t2[1] = n[2] * t1[0] - n[0] * t1[2];
    t2[2] = n[0] * t1[1] - n[1] * t1[0];
}

void Euler::eigen(const double* u, const Point& n, double* R, double* Rinv,
                  double* lam) const {
    const int m = ncomp();
    const double rho = u[0];
    const double p = pressure(u);
    const double c = std::sqrt(gamma_ * p / rho);
    const double H = (u[dim_ + 1] + p) / rho;
    const double b1 = (gamma_ - 1.0) / (c * c);
    double vel[3] = {0.0, 0.0, 0.0};
    double q2 = 0.0;
    for (int k = 0; k < dim_; ++k) {
        vel[k] = u[1 + k] / rho;
        q2 += vel[k] * vel[k];
    }
    const double b2 = 0.5 * b1 * q2;
    double vn = 0.0;
    for (int k = 0; k < dim_; ++k) vn += vel[k] * n[k];

    auto set_acoustic = [&](int col_minus, int col_plus) {
        // columns for vn -+ c and the entropy/shear rows they share
        R[0 * m + col_minus] = 1.0;
        R[0 * m + col_plus] = 1.0;
        for (int k = 0; k < dim_; ++k) {
            R[(1 + k) * m + col_minus] = vel[k] - c * n[k];
            R[(1 + k) * m + col_plus] = vel[k] + c * n[k];
        }
        R[(dim_ + 1) * m + col_minus] = H - c * vn;
        R[(dim_ + 1) * m + col_plus] = H + c * vn;
        double* lm = Rinv + col_minus * m;
        double* lp = Rinv + col_plus * m;
        lm[0] = 0.5 * (b2 + vn / c);
        lp[0] = 0.5 * (b2 - vn / c);
        for (int k = 0; k < dim_; ++k) {
            lm[1 + k] = 0.5 * (-b1 * vel[k] - n[k] / c);
            lp[1 + k] = 0.5 * (-b1 * vel[k] + n[k] / c);
        }
        lm[dim_ + 1] = 0.5 * b1;
        lp[dim_ + 1] = 0.5 * b1;
        lam[col_minus] = vn - c;
        lam[col_plus] = vn + c;
    };
    auto set_entropy = [&](int col) {
        R[0 * m + col] = 1.0;
        for (int k = 0; k < dim_; ++k) R[(1 + k) * m + col] = vel[k];
        R[(dim_ + 1) * m + col] = 0.5 * q2;
        double* l = Rinv + col * m;
        l[0] = 1.0 - b2;
        for (int k = 0; k < dim_; ++k) l[1 + k] = b1 * vel[k];
        l[dim_ + 1] = -b1;
        lam[col] = vn;
    };
    auto set_shear = [&](int col, const Point& t) {
        double vt = 0.0;
        for (int k = 0; k < dim_; ++k) vt += vel[k] * t[k];
        R[0 * m + col] = 0.0;
        for (int k = 0; k < dim_; ++k) R[(1 + k) * m + col] = t[k];
        R[(dim_ + 1) * m + col] = vt;
        double* l = Rinv + col * m;
        l[0] = -vt;
        for (int k = 0; k < dim_; ++k) l[1 + k] = t[k];
        l[dim_ + 1] = 0.0;
        lam[col] = vn;
    };

    if (dim_ == 1) {
        set_acoustic(0, 2);
        set_entropy(1);
    } else if (dim_ == 2) {
        set_acoustic(0, 3);
        set_entropy(1);
        set_shear(2, Point{-n[1], n[0], 0.0});
    } else {
        Point t1, t2;
        tangent_frame(n, t1, t2);
        set_acoustic(0, 4);
        set_entropy(1);
        set_shear(2, t1);
        set_shear(3, t2);
    }
}

}  // namespace wlseno
