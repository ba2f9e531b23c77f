#pragma once

#include <array>
#include <memory>
#include <string>

#include "wlseno/mesh.hpp"

namespace wlseno {

// A hyperbolic conservation law u_t + div F(u) = 0, queried through
// direction-projected fluxes F(u).n so solvers never see the full tensor.
class ConservationLaw {
public:
    virtual ~ConservationLaw() = default;

    virtual int ncomp() const = 0;
    virtual int dim() const = 0;

    // f <- F(u) . n, f has length ncomp(). n need not be unit for flux(),
    // but eigen() and normal_speed() require |n| = 1.
    virtual void flux(const double* u, const Point& n, double* f) const = 0;

    // largest |wave speed| over all unit directions, for time step control
    virtual double max_speed(const double* u) const = 0;

    // largest |wave speed| in direction n
    virtual double normal_speed(const double* u, const Point& n) const = 0;

    // Characteristic decomposition of the projected Jacobian d(F.n)/du:
    // R diag(lam) Rinv. Matrices are ncomp x ncomp row-major.
    virtual bool has_eigen() const { return false; }
    virtual void eigen(const double* /*u*/, const Point& /*n*/, double* /*R*/,
                       double* /*Rinv*/, double* /*lam*/) const;

    // physically meaningful state (positivity etc.); always true for scalars
    virtual bool admissible(const double* /*u*/) const { return true; }

    // state used at a reflecting wall with outward unit normal n: the ghost
    // value seen from inside. Default reflects nothing (transmissive).
    virtual void mirror_state(const double* u, const Point& n, double* ghost) const;
};

// u_t + div(v u) = 0 with constant velocity v
class Advection final : public ConservationLaw {
public:
    explicit Advection(int dim, const Point& vel) : dim_(dim), vel_(vel) {}

    int ncomp() const override { return 1; }
    int dim() const override { return dim_; }
    void flux(const double* u, const Point& n, double* f) const override;
    double max_speed(const double* u) const override;
    double normal_speed(const double* u, const Point& n) const override;

private:
    int dim_;
    Point vel_;
};

// u_t + sum_k d/dx_k (u^2/2) = 0
class Burgers final : public ConservationLaw {
public:
    explicit Burgers(int dim) : dim_(dim) {}

    int ncomp() const override { return 1; }
    int dim() const override { return dim_; }
    void flux(const double* u, const Point& n, double* f) const override;
    double max_speed(const double* u) const override;
    double normal_speed(const double* u, const Point& n) const override;

private:
    int dim_;
};

// Compressible Euler equations; state (rho, rho*velocity..., E),
// ncomp = dim + 2, ideal gas with ratio of specific heats gamma.
class Euler final : public ConservationLaw {
public:
    explicit Euler(int dim, double gamma = 1.4) : dim_(dim), gamma_(gamma) {}

    int ncomp() const override { return dim_ + 2; }
    int dim() const override { return dim_; }
    double gamma() const { return gamma_; }

    double pressure(const double* u) const;
    double sound_speed(const double* u) const;

    void flux(const double* u, const Point& n, double* f) const override;
    double max_speed(const double* u) const override;
    double normal_speed(const double* u, const Point& n) const override;

    bool has_eigen() const override { return true; }
    void eigen(const double* u, const Point& n, double* R, double* Rinv,
               double* lam) const override;

    bool admissible(const double* u) const override;
    void mirror_state(const double* u, const Point& n, double* ghost) const override;

private:
    int dim_;
    double gamma_;
};

// unit tangents completing n to an orthonormal frame; deterministic choice
void tangent_frame(const Point& n, Point& t1, Point& t2);

}  // namespace wlseno
