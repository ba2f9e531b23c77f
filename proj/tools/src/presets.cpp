#include "bench/presets.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "bench/burgers_ref.hpp"
#include "bench/riemann.hpp"
#include "bench/spherical.hpp"
#include "wlseno/laws.hpp"
#include "wlseno/mesh.hpp"
#include "wlseno/mesh_io.hpp"
#include "wlseno/mesh_solver.hpp"
#include "wlseno/solver1d.hpp"

namespace bench {

namespace {

using wlseno::Advection;
using wlseno::AhfMesh;
using wlseno::BoundaryMode1D;
using wlseno::Burgers;
using wlseno::Euler;
using wlseno::Grid1D;
using wlseno::IndicatorConfig;
using wlseno::MeshSolver;
using wlseno::MeshSolverConfig;
using wlseno::PeriodicPair;
using wlseno::Point;
using wlseno::ReconMode;
using wlseno::Solver1D;
using wlseno::SolverConfig1D;

constexpr double pi = 3.14159265358979323846;

// ---------------------------------------------------------------- config

double cfg_num(const Config& c, const std::string& k, double def) {
    return c.get_num(k, def);
}
int cfg_int(const Config& c, const std::string& k, int def) { return c.get_int(k, def); }
bool cfg_flag(const Config& c, const std::string& k, bool def) {
    return c.get_flag(k, def);
}
std::string cfg_str(const Config& c, const std::string& k, const std::string& def) {
    return c.get_str(k, def);
}

void apply_recon_cfg(const Config& c, wlseno::ReconConfig& rc) {
    rc.degree = cfg_int(c, "degree", rc.degree);
    rc.epsilon = cfg_num(c, "epsilon", rc.epsilon);
    rc.alpha_boost = cfg_num(c, "alpha_boost", rc.alpha_boost);
    rc.target_mult = cfg_num(c, "target_mult", rc.target_mult);
    rc.rebalance = cfg_flag(c, "rebalance", rc.rebalance);
    if (c.has("rule_degree")) rc.rule_degree = c.get_int("rule_degree", -1);
}

ReconMode cfg_mode(const Config& c, ReconMode def) {
    if (!c.has("mode")) return def;
    const std::string m = c.get_str("mode", "");
    if (m == "componentwise") return ReconMode::componentwise;
    if (m == "characteristic") return ReconMode::characteristic;
    throw std::invalid_argument("mode must be componentwise or characteristic, got " + m);
}

std::string cfg_grid_kind(const Config& c, const std::string& def) {
    const std::string m = cfg_str(c, "mesh", def);
    if (m != "uniform" && m != "perturbed" && m != "irregular")
        throw std::invalid_argument("mesh must be uniform, perturbed, or irregular, got " + m);
    return m;
}

// ---------------------------------------------------------------- norms

std::vector<double> component(const std::vector<double>& u, int nc, int c) {
    std::vector<double> out(u.size() / nc);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i * nc + c];
    return out;
}

void add_error_norms(RunResult& r, const std::vector<double>& num,
                     const std::vector<double>& ref, const std::vector<double>& vol) {
    double linf = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < num.size(); ++i) {
        const double e = std::abs(num[i] - ref[i]);
        linf = std::max(linf, e);
        l1 += e * vol[i];
    }
    r.norms.emplace_back("inf", linf);
    r.norms.emplace_back("l1", l1);
}

double tv_1d(const std::vector<double>& v, bool periodic) {
    double tv = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) tv += std::abs(v[i + 1] - v[i]);
    if (periodic && v.size() > 1) tv += std::abs(v.front() - v.back());
    return tv;
}

// ---------------------------------------------------------------- snapshots

void snapshot_1d(const Grid1D& g, const std::vector<double>& u, int nc,
                 const std::vector<std::string>& names, RunResult& r) {
    const int n = g.n();
    r.comp_names = names;
    r.x.resize(n);
    r.measure.resize(n);
    for (int i = 0; i < n; ++i) {
        r.x[i] = g.center(i);
        r.measure[i] = g.dx(i);
    }
    r.state.assign(nc, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < nc; ++c) r.state[c][i] = u[static_cast<std::size_t>(i) * nc + c];
}

void snapshot_mesh(const AhfMesh& m, const std::vector<double>& u, int nc,
                   const std::vector<std::string>& names, RunResult& r) {
    const int n = m.n_elems();
    r.comp_names = names;
    r.x.resize(n);
    r.y.resize(n);
    r.measure.resize(n);
    if (m.dim >= 3) r.z.resize(n);
    for (int i = 0; i < n; ++i) {
        r.x[i] = m.centroid[i][0];
        r.y[i] = m.centroid[i][1];
        if (m.dim >= 3) r.z[i] = m.centroid[i][2];
        r.measure[i] = m.measure[i];
    }
    r.state.assign(nc, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < nc; ++c) r.state[c][i] = u[static_cast<std::size_t>(i) * nc + c];
}

// ---------------------------------------------------------------- marching

template <class Solver>
void march(Solver& solver, std::vector<double>& u, double t_end, bool adaptive,
           double sigma, double dt0, RunResult& out) {
    double t = 0.0;
    const double tiny = 1e-12 * std::max(1.0, std::abs(t_end));
    while (t < t_end - tiny) {
        double dt = adaptive ? solver.stable_dt(u.data(), sigma) : dt0;
        if (!(dt > 0.0) || !std::isfinite(dt)) {
            out.failed = true;
            out.fail_time = t;
            out.fail_reason = "nonpositive or nonfinite time step";
            break;
        }
        dt = std::min(dt, t_end - t);
        solver.rk3_step(u.data(), dt);
        t += dt;
        ++out.steps;
        if (!solver.field_admissible(u.data())) {
            out.failed = true;
            out.fail_time = t;
            out.fail_reason = "inadmissible state (NaN or positivity loss)";
            break;
        }
    }
    out.t_final = t;
}

struct WallClock {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// ---------------------------------------------------------------- fixtures

std::string mesh_path(const RunOptions& o, const std::string& family, int res) {
    const std::string m = cfg_str(o.config, "mesh", "");
    if (m.find('/') != std::string::npos || m.find(".txt") != std::string::npos)
        return m;  // explicit mesh file path overrides the family
    return resolve_fixture_dir(o.fixture_dir) + "/meshes/" + family +
           std::to_string(res) + ".txt";
}

std::vector<PeriodicPair> box_periodic(int dim, double len) {
    std::vector<PeriodicPair> p;
    p.push_back({wlseno::tag_xlo, wlseno::tag_xhi, Point{len, 0.0, 0.0}});
    if (dim >= 2) p.push_back({wlseno::tag_ylo, wlseno::tag_yhi, Point{0.0, len, 0.0}});
    if (dim >= 3) p.push_back({wlseno::tag_zlo, wlseno::tag_zhi, Point{0.0, 0.0, len}});
    return p;
}

double rep_h(const AhfMesh& m) {
    double total = 0.0;
    for (double v : m.measure) total += v;
    return std::pow(total / m.n_elems(), 1.0 / m.dim);
}

// ------------------------------------------------------------ 1-D presets

// split test function of the reconstruction study: sin(pi x) left of the
// break, cos(pi x) right of it
constexpr double recon_split = 0.6;

double recon_fn(double x) {
    return x < recon_split ? std::sin(pi * x) : std::cos(pi * x);
}

double recon_fn_avg(double a, double b) {
    auto fsin = [](double x) { return -std::cos(pi * x) / pi; };
    auto fcos = [](double x) { return std::sin(pi * x) / pi; };
    double acc;
    if (b <= recon_split)
        acc = fsin(b) - fsin(a);
    else if (a >= recon_split)
        acc = fcos(b) - fcos(a);
    else
        acc = (fsin(recon_split) - fsin(a)) + (fcos(b) - fcos(recon_split));
    return acc / (b - a);
}

RunResult run_recon1d(const RunOptions& o) {
    RunResult r;
    r.preset = "recon1d-discontinuous";
    const int N = o.resolution > 0 ? o.resolution : 128;
    const int degree = cfg_int(o.config, "degree", 4);
    const int n = cfg_int(o.config, "stencil", 7);
    if (N < n) throw std::invalid_argument("resolution below stencil size");
    IndicatorConfig ind;
    ind.epsilon = cfg_num(o.config, "epsilon", 1e-2);
    ind.alpha_boost = cfg_num(o.config, "alpha_boost", 1.5);

    const Grid1D g = Grid1D::uniform(0.0, 1.0, N);
    std::vector<double> ub(N), um(N), up(N);
    for (int i = 0; i < N; ++i) ub[i] = recon_fn_avg(g.edge[i], g.edge[i + 1]);
    wlseno::line_face_reconstruction(g, ub.data(), degree, n, /*periodic=*/false, ind,
                                     1e-10, um.data(), up.data());

    // worst face-trace error per cell, classified by distance to the break
    const int D = static_cast<int>(recon_split * N);
    const int half = n / 2;
    double e_smooth = 0.0, e_near = 0.0;
    std::vector<double> err(N);
    for (int i = 0; i < N; ++i) {
        const double e = std::max(std::abs(um[i] - recon_fn(g.edge[i + 1])),
                                  std::abs(up[i] - recon_fn(g.edge[i])));
        err[i] = e;
        if (std::abs(i - D) > half) e_smooth = std::max(e_smooth, e);
        if (std::abs(i - D) >= 2) e_near = std::max(e_near, e);
    }
    r.cells = N;
    r.h = 1.0 / N;
    r.norms.emplace_back("inf_smooth", e_smooth);
    r.norms.emplace_back("inf_near", e_near);
    snapshot_1d(g, ub, 1, {"u"}, r);
    r.aux_cols.emplace_back("trace_right", std::vector<double>(um));
    r.aux_cols.emplace_back("trace_left", std::vector<double>(up));
    r.aux_cols.emplace_back("face_err", err);
    return r;
}

double sine_avg(double a, double b, double shift) {
    // cell average of sin(pi (x - shift)) over [a, b]
    return (std::cos(pi * (a - shift)) - std::cos(pi * (b - shift))) / (pi * (b - a));
}

RunResult run_wave1d(const RunOptions& o, bool perturbed) {
    WallClock clock;
    RunResult r;
    r.preset = perturbed ? "wave1d-perturbed" : "wave1d-smooth";
    const int N = o.resolution > 0 ? o.resolution : 128;
    const double T = cfg_num(o.config, "final_time", 1.0);
    const double amp = cfg_num(o.config, "perturb_amp", 0.3);
    const auto seed = static_cast<uint64_t>(cfg_int(o.config, "seed", 1234));
    const Grid1D g = perturbed ? Grid1D::perturbed(-1.0, 1.0, N, amp, seed)
                               : Grid1D::uniform(-1.0, 1.0, N);

    Advection law(1, Point{1.0, 0.0, 0.0});
    SolverConfig1D sc;
    apply_recon_cfg(o.config, sc.recon);
    sc.recon.degree = cfg_int(o.config, "degree", 4);
    sc.stencil_n = cfg_int(o.config, "stencil", -1);
    sc.boundary = BoundaryMode1D::periodic;
    sc.local_lf = cfg_flag(o.config, "local_lf", false);
    Solver1D solver(g, law, sc);

    std::vector<double> u(N), ref(N), vol(N);
    for (int i = 0; i < N; ++i) {
        u[i] = sine_avg(g.edge[i], g.edge[i + 1], 0.0);
        ref[i] = sine_avg(g.edge[i], g.edge[i + 1], T);
        vol[i] = g.dx(i);
    }

    // fixed step shrinking faster than h so the spatial order is visible
    double hmin = g.dx(0);
    for (int i = 1; i < N; ++i) hmin = std::min(hmin, g.dx(i));
    const double h0 = 2.0 / 32.0;
    const double dt_pow = cfg_num(o.config, "dt_pow", 2.0 / 3.0);
    const double dt0 = cfg_num(o.config, "cfl", 1.2) * hmin * std::pow(hmin / h0, dt_pow);

    march(solver, u, T, /*adaptive=*/false, 0.0, dt0, r);
    r.cells = N;
    r.h = g.length() / N;
    add_error_norms(r, u, ref, vol);
    r.extra.emplace_back("dt", dt0);
    r.extra.emplace_back("wall_s", clock.seconds());
    snapshot_1d(g, u, 1, {"u"}, r);
    r.aux_cols.emplace_back("ref_u", ref);
    return r;
}

RunResult run_burgers1d(const RunOptions& o, bool shocked) {
    WallClock clock;
    RunResult r;
    r.preset = shocked ? "burgers1d-shocked" : "burgers1d";
    const int N = o.resolution > 0 ? o.resolution : (shocked ? 512 : 256);
    const double T = cfg_num(o.config, "final_time", shocked ? 1.4 : 1.0);
    const Grid1D g = Grid1D::uniform(0.0, 2.0 * pi, N);

    Burgers law(1);
    SolverConfig1D sc;
    apply_recon_cfg(o.config, sc.recon);
    sc.recon.degree = cfg_int(o.config, "degree", 4);
    sc.stencil_n = cfg_int(o.config, "stencil", -1);
    sc.boundary = BoundaryMode1D::periodic;
    sc.local_lf = cfg_flag(o.config, "local_lf", false);
    Solver1D solver(g, law, sc);

    std::vector<double> u(N), vol(N, g.dx(0));
    solver.project_ic([](double x, double* v) { v[0] = 0.3 + 0.7 * std::sin(x); }, 9,
                      u.data());
    const std::vector<double> ref = burgers_exact_averages(g.edge, T);

    const double hmin = g.dx(0);
    const double cfl = cfg_num(o.config, "cfl", shocked ? 0.9 : 0.6);
    const double dt_pow = cfg_num(o.config, "dt_pow", shocked ? 0.0 : 1.0);
    const double dt0 = cfl * hmin * std::pow(hmin / (2.0 * pi / 64.0), dt_pow);

    march(solver, u, T, /*adaptive=*/false, 0.0, dt0, r);
    r.cells = N;
    r.h = g.length() / N;
    add_error_norms(r, u, ref, vol);
    r.extra.emplace_back("dt", dt0);
    if (shocked) {
        const double tv = tv_1d(u, true);
        const double tv_ref = tv_1d(ref, true);
        r.extra.emplace_back("tv", tv);
        r.extra.emplace_back("tv_ref", tv_ref);
        r.flags.emplace_back("tv_within_bound", tv <= 1.1 * tv_ref);
        r.flags.emplace_back("l1_within_bound", r.norm("l1") < 5e-3);
    }
    r.extra.emplace_back("wall_s", clock.seconds());
    snapshot_1d(g, u, 1, {"u"}, r);
    r.aux_cols.emplace_back("ref_u", ref);
    return r;
}

void euler_prim_to_cons(double gamma, double rho, double vel, double p, double* u) {
    u[0] = rho;
    u[1] = rho * vel;
    u[2] = p / (gamma - 1.0) + 0.5 * rho * vel * vel;
}

RunResult run_sod(const RunOptions& o) {
    WallClock clock;
    RunResult r;
    r.preset = "sod";
    const int N = o.resolution > 0 ? o.resolution : 400;
    const double T = cfg_num(o.config, "final_time", 1.0);
    const double gamma = 1.4;
    const std::string kind = cfg_grid_kind(o.config, "perturbed");
    const double amp = cfg_num(o.config, "perturb_amp", 0.3);
    const auto seed = static_cast<uint64_t>(cfg_int(o.config, "seed", 1234));
    const Grid1D g = kind == "perturbed" ? Grid1D::perturbed(-2.5, 2.5, N, amp, seed)
                                         : Grid1D::uniform(-2.5, 2.5, N);

    Euler law(1, gamma);
    SolverConfig1D sc;
    apply_recon_cfg(o.config, sc.recon);
    sc.recon.degree = cfg_int(o.config, "degree", 4);
    sc.stencil_n = cfg_int(o.config, "stencil", -1);
    sc.boundary = BoundaryMode1D::reflective;
    sc.mode = cfg_mode(o.config, ReconMode::characteristic);
    sc.local_lf = cfg_flag(o.config, "local_lf", false);
    sc.positivity_fallback = cfg_flag(o.config, "positivity_fallback", true);
    Solver1D solver(g, law, sc);

    const GasState left{1.0, 0.0, 1.0}, right{0.125, 0.0, 0.1};
    std::vector<double> u(static_cast<std::size_t>(N) * 3);
    solver.project_ic(
        [&](double x, double* v) {
            const GasState& s = x < 0.0 ? left : right;
            euler_prim_to_cons(gamma, s.rho, s.u, s.p, v);
        },
        0, u.data());

    march(solver, u, T, /*adaptive=*/true, cfg_num(o.config, "cfl", 1.2), 0.0, r);

    const RiemannSolution exact(left, right, gamma);
    std::vector<double> rho = component(u, 3, 0), rho_ref(N), vol(N);
    for (int i = 0; i < N; ++i) {
        rho_ref[i] = exact.density_cell_average(g.edge[i], g.edge[i + 1], r.t_final);
        vol[i] = g.dx(i);
    }
    r.cells = N;
    r.h = g.length() / N;
    add_error_norms(r, rho, rho_ref, vol);

    double rho_min = rho[0], rho_max = rho[0], p_min = 1e300;
    for (int i = 0; i < N; ++i) {
        rho_min = std::min(rho_min, rho[i]);
        rho_max = std::max(rho_max, rho[i]);
        p_min = std::min(p_min, law.pressure(&u[static_cast<std::size_t>(i) * 3]));
    }
    // new extrema against the exact range [0.125, 1], as a fraction of the jump
    const double jump = left.rho - right.rho;
    const double overshoot = std::max({rho_max - left.rho, right.rho - rho_min, 0.0});
    const double tv = tv_1d(rho, false), tv_ref = tv_1d(rho_ref, false);
    r.extra.emplace_back("rho_min", rho_min);
    r.extra.emplace_back("p_min", p_min);
    r.extra.emplace_back("overshoot", overshoot);
    r.extra.emplace_back("tv", tv);
    r.extra.emplace_back("tv_ref", tv_ref);
    r.extra.emplace_back("fallbacks", static_cast<double>(solver.positivity_fallbacks()));
    r.flags.emplace_back("l1_within_bound", r.norm("l1") < 1e-2);
    r.flags.emplace_back("positive", rho_min > 0.0 && p_min > 0.0 && !r.failed);
    r.flags.emplace_back("no_new_extrema", overshoot <= 0.01 * jump);
    r.flags.emplace_back("tv_within_bound", tv <= 1.1 * tv_ref);
    r.extra.emplace_back("wall_s", clock.seconds());
    snapshot_1d(g, u, 3, {"rho", "mom", "E"}, r);
    r.aux_cols.emplace_back("ref_rho", rho_ref);
    return r;
}

RunResult run_blast(const RunOptions& o) {
    WallClock clock;
    RunResult r;
    r.preset = "blast";
    const int N = o.resolution > 0 ? o.resolution : 800;
    const int Nref = cfg_int(o.config, "self_ref_n", 4000);
    if (Nref % N != 0)
        throw std::invalid_argument("blast: self_ref_n must be a multiple of the resolution");
    const double T = cfg_num(o.config, "final_time", 0.038);
    const double gamma = 1.4;

    // three constant states separated at 0.1 and 0.9, reflecting walls
    const double xs0 = 0.1, xs1 = 0.9;
    const double p0 = 1000.0, p1 = 0.01, p2 = 100.0;
    auto ic_avg = [&](double a, double b, double* v) {
        const double len = b - a;
        const double f0 = std::clamp((xs0 - a) / len, 0.0, 1.0);
        const double f2 = std::clamp((b - xs1) / len, 0.0, 1.0);
        const double f1 = std::max(0.0, 1.0 - f0 - f2);
        const double p = f0 * p0 + f1 * p1 + f2 * p2;
        euler_prim_to_cons(gamma, 1.0, 0.0, p, v);
    };

    auto solve = [&](int n, RunResult& out, std::vector<double>& u, Grid1D& g) {
        g = Grid1D::uniform(0.0, 1.0, n);
        Euler law(1, gamma);
        SolverConfig1D sc;
        apply_recon_cfg(o.config, sc.recon);
        sc.recon.degree = cfg_int(o.config, "degree", 4);
        sc.stencil_n = cfg_int(o.config, "stencil", -1);
        sc.boundary = BoundaryMode1D::reflective;
        sc.mode = cfg_mode(o.config, ReconMode::characteristic);
        // per-face wave-speed bound: the global bound (~37 from the hot
        // region) amplifies trace noise in the p=0.01 band until the
        // pressure goes negative
        sc.local_lf = cfg_flag(o.config, "local_lf", true);
        sc.positivity_fallback = cfg_flag(o.config, "positivity_fallback", true);
        Solver1D solver(g, law, sc);
        u.assign(static_cast<std::size_t>(n) * 3, 0.0);
        for (int i = 0; i < n; ++i) ic_avg(g.edge[i], g.edge[i + 1], &u[3 * i]);
        march(solver, u, T, /*adaptive=*/true, cfg_num(o.config, "cfl", 0.6), 0.0, out);
        out.extra.emplace_back(out.preset == "blast" ? "fallbacks" : "fallbacks_ref",
                               static_cast<double>(solver.positivity_fallbacks()));
    };

    Grid1D g;
    std::vector<double> u;
    solve(N, r, u, g);

    RunResult rref;
    rref.preset = "blast-self-reference";
    Grid1D gref;
    std::vector<double> uref;
    solve(Nref, rref, uref, gref);
    if (rref.failed) {
        r.failed = true;
        r.fail_time = rref.fail_time;
        r.fail_reason = "self-reference run: " + rref.fail_reason;
    }

    // exact restriction of the fine run: coarse cells are unions of fine ones
    const int ratio = Nref / N;
    std::vector<double> rho = component(u, 3, 0), rho_ref(N, 0.0), vol(N);
    for (int i = 0; i < N; ++i) {
        for (int k = 0; k < ratio; ++k) rho_ref[i] += uref[3 * (i * ratio + k)];
        rho_ref[i] /= ratio;
        vol[i] = g.dx(i);
    }
    r.cells = N;
    r.h = 1.0 / N;
    add_error_norms(r, rho, rho_ref, vol);
    double denom = 0.0;
    for (int i = 0; i < N; ++i) denom += std::abs(rho_ref[i]) * vol[i];
    const double l1_rel = r.norm("l1") / denom;
    r.norms.emplace_back("l1_rel_self", l1_rel);

    double rho_min = rho[0], p_min = 1e300;
    Euler law(1, gamma);
    for (int i = 0; i < N; ++i) {
        rho_min = std::min(rho_min, rho[i]);
        p_min = std::min(p_min, law.pressure(&u[static_cast<std::size_t>(i) * 3]));
    }
    const double tv = tv_1d(rho, false), tv_ref = tv_1d(rho_ref, false);
    r.extra.emplace_back("rho_min", rho_min);
    r.extra.emplace_back("p_min", p_min);
    r.extra.emplace_back("tv", tv);
    r.extra.emplace_back("tv_ref", tv_ref);
    r.extra.emplace_back("steps_ref", rref.steps);
    for (auto& kv : rref.extra)
        if (kv.first == "fallbacks_ref") r.extra.push_back(kv);
    r.flags.emplace_back("positive", rho_min > 0.0 && p_min > 0.0 && !r.failed);
    r.flags.emplace_back("l1_rel_within_bound", l1_rel <= 0.05);
    r.flags.emplace_back("tv_within_bound", tv <= 1.1 * tv_ref);
    r.extra.emplace_back("wall_s", clock.seconds());
    snapshot_1d(g, u, 3, {"rho", "mom", "E"}, r);
    r.aux_cols.emplace_back("ref_rho", rho_ref);
    return r;
}

// ------------------------------------------------------- mesh-based presets

// time-step scale for multi-dimensional runs: shrink sigma with resolution
// once the spatial order outruns the cubic-in-dt integrator
double mesh_sigma(const Config& c, int degree, int res, int res0) {
    const double cfl = cfg_num(c, "cfl", 1.0);
    const double def_pow = std::max(0.0, (degree + 1) / 3.0 - 1.0);
    const double dt_pow = cfg_num(c, "dt_pow", def_pow);
    return cfl * std::min(1.0, std::pow(static_cast<double>(res0) / res, dt_pow));
}

struct ScalarMeshPreset {
    const char* name;
    int dim;
    bool burgers;
    int default_res;
    int res0;  // coarsest default level, anchors the time-step scale
    const char* family_uniform;
    const char* family_irregular;  // null: no irregular variant
    double box_len;
    double default_t;
};

RunResult run_scalar_mesh(const RunOptions& o, const ScalarMeshPreset& sp) {
    WallClock clock;
    RunResult r;
    r.preset = sp.name;
    r.dim = sp.dim;
    const int res = o.resolution > 0 ? o.resolution : sp.default_res;
    const double T = cfg_num(o.config, "final_time", sp.default_t);
    std::string family = sp.family_uniform;
    if (sp.family_irregular && cfg_grid_kind(o.config, "irregular") != "uniform")
        family = sp.family_irregular;
    const AhfMesh mesh =
        wlseno::load_mesh(mesh_path(o, family, res), box_periodic(sp.dim, sp.box_len));

    MeshSolverConfig mc;
    apply_recon_cfg(o.config, mc.recon);
    mc.recon.degree = cfg_int(o.config, "degree", 2);
    mc.local_lf = cfg_flag(o.config, "local_lf", false);
    const int degree = mc.recon.degree;

    std::unique_ptr<wlseno::ConservationLaw> law;
    if (sp.burgers)
        law = std::make_unique<Burgers>(sp.dim);
    else
        law = std::make_unique<Advection>(sp.dim, Point{1.0, 1.0, 1.0});
    MeshSolver solver(mesh, *law, mc);

    const double k = 0.5 * pi;
    auto ic = [&](const Point& p, double* v) {
        const double s = p[0] + p[1] + (sp.dim == 3 ? p[2] : 0.0);
        v[0] = sp.burgers ? 0.3 + 0.7 * std::sin(k * s) : std::sin(k * s);
    };
    const int ne = mesh.n_elems();
    std::vector<double> u(ne);
    const int rule = 2 * degree + 2;
    solver.project_ic(ic, rule, u.data());

    const double sigma = mesh_sigma(o.config, degree, res, sp.res0);
    march(solver, u, T, /*adaptive=*/true, sigma, 0.0, r);
    r.cells = ne;
    r.h = rep_h(mesh);
    r.extra.emplace_back("sigma", sigma);

    if (!sp.burgers) {
        // the advected exact solution, averaged with the same rule as the IC
        std::vector<double> ref(ne);
        auto ic_shifted = [&](const Point& p, double* v) {
            const double s = p[0] + p[1] + (sp.dim == 3 ? p[2] : 0.0);
            v[0] = std::sin(k * (s - sp.dim * T));
        };
        solver.project_ic(ic_shifted, rule, ref.data());
        add_error_norms(r, u, ref, mesh.measure);
        snapshot_mesh(mesh, u, 1, {"u"}, r);
        r.aux_cols.emplace_back("ref_u", ref);
    } else {
        double umin = u[0], umax = u[0];
        for (double v : u) {
            umin = std::min(umin, v);
            umax = std::max(umax, v);
        }
        r.extra.emplace_back("u_min", umin);
        r.extra.emplace_back("u_max", umax);
        snapshot_mesh(mesh, u, 1, {"u"}, r);
    }
    if (mc.recon.rebalance)
        r.extra.emplace_back("rebalances", static_cast<double>(solver.rebalance_count()));
    r.extra.emplace_back("wall_s", clock.seconds());
    return r;
}

RunResult run_vortex(const RunOptions& o) {
    WallClock clock;
    RunResult r;
    r.preset = "vortex2d";
    r.dim = 2;
    const int res = o.resolution > 0 ? o.resolution : 20;
    const double T = cfg_num(o.config, "final_time", 1.0);
    const double gamma = 1.4, beta = 5.0, L = 10.0;
    const AhfMesh mesh =
        wlseno::load_mesh(mesh_path(o, "vortex_nx", res), box_periodic(2, L));

    MeshSolverConfig mc;
    apply_recon_cfg(o.config, mc.recon);
    mc.recon.degree = cfg_int(o.config, "degree", 4);
    mc.mode = cfg_mode(o.config, ReconMode::componentwise);
    mc.local_lf = cfg_flag(o.config, "local_lf", false);
    mc.positivity_fallback = cfg_flag(o.config, "positivity_fallback", true);
    const int degree = mc.recon.degree;
    Euler law(2, gamma);
    MeshSolver solver(mesh, law, mc);

    // isentropic vortex riding the (1,1) mean flow; the exact solution is the
    // initial field advected across the periodic box
    auto prim = [&](double x, double y, double* v) {
        const double xb = x - 5.0, yb = y - 5.0;
        const double r2 = xb * xb + yb * yb;
        const double e1 = std::exp(0.5 * (1.0 - r2));
        const double tmp = beta / (2.0 * pi) * e1;
        const double Tq = 1.0 - (gamma - 1.0) * beta * beta /
                                    (8.0 * gamma * pi * pi) * std::exp(1.0 - r2);
        v[0] = std::pow(Tq, 1.0 / (gamma - 1.0));            // rho
        v[1] = 1.0 - tmp * yb;                               // u
        v[2] = 1.0 + tmp * xb;                               // v
        v[3] = std::pow(Tq, gamma / (gamma - 1.0));          // p
    };
    auto cons_at = [&](double x, double y, double* c) {
        double v[4];
        prim(x, y, v);
        c[0] = v[0];
        c[1] = v[0] * v[1];
        c[2] = v[0] * v[2];
        c[3] = v[3] / (gamma - 1.0) + 0.5 * v[0] * (v[1] * v[1] + v[2] * v[2]);
    };
    auto wrap = [&](double x) { return x - L * std::floor(x / L); };

    const int ne = mesh.n_elems();
    const int rule = 2 * degree + 2;
    std::vector<double> u(static_cast<std::size_t>(ne) * 4);
    solver.project_ic([&](const Point& p, double* c) { cons_at(p[0], p[1], c); }, rule,
                      u.data());

    const double sigma = mesh_sigma(o.config, degree, res, 10);
    march(solver, u, T, /*adaptive=*/true, sigma, 0.0, r);
    r.cells = ne;
    r.h = rep_h(mesh);
    r.extra.emplace_back("sigma", sigma);

    std::vector<double> ref(static_cast<std::size_t>(ne) * 4);
    solver.project_ic(
        [&](const Point& p, double* c) { cons_at(wrap(p[0] - T), wrap(p[1] - T), c); },
        rule, ref.data());
    const std::vector<double> rho = component(u, 4, 0), rho_ref = component(ref, 4, 0);
    add_error_norms(r, rho, rho_ref, mesh.measure);
    r.extra.emplace_back("fallbacks", static_cast<double>(solver.positivity_fallbacks()));
    r.extra.emplace_back("wall_s", clock.seconds());
    snapshot_mesh(mesh, u, 4, {"rho", "mom_x", "mom_y", "E"}, r);
    r.aux_cols.emplace_back("ref_rho", rho_ref);
    return r;
}

// shared reference cache so convergence levels reuse the fine radial solve
const RadialProfile& cached_spherical(const SphericalSetup& s) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, double, double>, RadialProfile> cache;
    std::lock_guard<std::mutex> lock(mu);
    const auto key = std::make_tuple(s.dim, s.fine_n, s.t_final, s.cfl);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, spherical_reference(s)).first;
    return it->second;
}

RunResult run_explosion(const RunOptions& o, int dim) {
    WallClock clock;
    RunResult r;
    r.preset = dim == 2 ? "explosion2d" : "explosion3d";
    r.dim = dim;
    const int res = o.resolution > 0 ? o.resolution : (dim == 2 ? 30 : 10);
    const double T = cfg_num(o.config, "final_time", 0.1);
    const double gamma = 1.4, r_jump = 0.2;
    const std::string family = dim == 2 ? "disk_nr" : "ball_nx";
    const AhfMesh mesh = wlseno::load_mesh(mesh_path(o, family, res), {});

    MeshSolverConfig mc;
    apply_recon_cfg(o.config, mc.recon);
    mc.recon.degree = cfg_int(o.config, "degree", 2);
    mc.mode = cfg_mode(o.config, ReconMode::characteristic);
    mc.local_lf = cfg_flag(o.config, "local_lf", false);
    mc.positivity_fallback = cfg_flag(o.config, "positivity_fallback", true);
    const int degree = mc.recon.degree;
    Euler law(dim, gamma);
    MeshSolver solver(mesh, law, mc);
    const int nc = law.ncomp();

    const double rho_in = 1.0, p_in = 1.0, rho_out = 0.125, p_out = 0.1;
    auto ic = [&](const Point& p, double* c) {
        const double rad = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        const bool in = rad <= r_jump;
        for (int k = 0; k < nc; ++k) c[k] = 0.0;
        c[0] = in ? rho_in : rho_out;
        c[nc - 1] = (in ? p_in : p_out) / (gamma - 1.0);
    };
    const int ne = mesh.n_elems();
    std::vector<double> u(static_cast<std::size_t>(ne) * nc);
    const int levels = cfg_int(o.config, "ic_subdiv_levels", dim == 2 ? 6 : 5);
    solver.project_ic_subdivided(ic, levels, u.data());

    const int res0 = dim == 2 ? 15 : 10;
    const double sigma = mesh_sigma(o.config, degree, res, res0);
    march(solver, u, T, /*adaptive=*/true, sigma, 0.0, r);
    r.cells = ne;
    r.h = rep_h(mesh);
    r.extra.emplace_back("sigma", sigma);

    SphericalSetup sp;
    sp.dim = dim;
    sp.gamma = gamma;
    sp.inner = {rho_in, 0.0, p_in};
    sp.outer = {rho_out, 0.0, p_out};
    sp.r_jump = r_jump;
    sp.t_final = r.t_final;
    sp.fine_n = cfg_int(o.config, "fine_n", 4000);
    const RadialProfile& prof = cached_spherical(sp);

    // density error against the radial reference, cell-by-cell and as a
    // binned radial profile (bin width ~ 2h)
    std::vector<double> rho = component(u, nc, 0), rho_ref(ne);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < ne; ++i) {
        const Point& c = mesh.centroid[i];
        const double rad = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
        rho_ref[i] = profile_density_at(prof, rad);
        num += std::abs(rho[i] - rho_ref[i]) * mesh.measure[i];
        den += std::abs(rho_ref[i]) * mesh.measure[i];
    }
    add_error_norms(r, rho, rho_ref, mesh.measure);
    r.norms.emplace_back("l1_rel", num / den);

    const int nbins = std::max(20, static_cast<int>(std::ceil(1.0 / (2.0 * r.h))));
    std::vector<double> bin_rho(nbins, 0.0), bin_vol(nbins, 0.0);
    for (int i = 0; i < ne; ++i) {
        const Point& c = mesh.centroid[i];
        const double rad = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
        int b = std::min(nbins - 1, static_cast<int>(rad * nbins));
        bin_rho[b] += rho[i] * mesh.measure[i];
        bin_vol[b] += mesh.measure[i];
    }
    double pnum = 0.0, pden = 0.0;
    for (int b = 0; b < nbins; ++b) {
        if (bin_vol[b] <= 0.0) continue;
        const double rb = (b + 0.5) / nbins;
        const double d = std::abs(bin_rho[b] / bin_vol[b] - profile_density_at(prof, rb));
        pnum += d * bin_vol[b];
        pden += std::abs(profile_density_at(prof, rb)) * bin_vol[b];
    }
    r.norms.emplace_back("l1_rel_profile", pnum / pden);

    double rho_min = rho[0], p_minv = 1e300;
    for (int i = 0; i < ne; ++i) {
        rho_min = std::min(rho_min, rho[i]);
        p_minv = std::min(p_minv, law.pressure(&u[static_cast<std::size_t>(i) * nc]));
    }
    r.extra.emplace_back("rho_min", rho_min);
    r.extra.emplace_back("p_min", p_minv);
    r.extra.emplace_back("ref_steps", prof.steps);
    r.extra.emplace_back("fallbacks", static_cast<double>(solver.positivity_fallbacks()));
    r.flags.emplace_back("positive", rho_min > 0.0 && p_minv > 0.0 && !r.failed);
    r.flags.emplace_back("l1_rel_within_bound", r.norm("l1_rel_profile") <= 0.05);
    r.extra.emplace_back("wall_s", clock.seconds());

    std::vector<std::string> names = {"rho"};
    for (int k = 0; k < dim; ++k) names.push_back(std::string("mom_") + "xyz"[k]);
    names.push_back("E");
    snapshot_mesh(mesh, u, nc, names, r);
    r.aux_cols.emplace_back("ref_rho", rho_ref);
    return r;
}

// ---------------------------------------------------------------- registry

const ScalarMeshPreset wave2d_spec{"wave2d", 2,     false,
                                   16,       8,     "square_uniform_nx",
                                   "square_irregular_nx", 4.0, 1.0};
const ScalarMeshPreset burgers2d_spec{"burgers2d", 2,       true, 16, 8,
                                      "square_uniform_nx", nullptr, 4.0, 0.5};
const ScalarMeshPreset wave3d_spec{"wave3d", 3,       false, 6, 4, "cube_nx",
                                   nullptr,  4.0, 1.0};
const ScalarMeshPreset burgers3d_spec{"burgers3d", 3,       true, 6, 4, "cube_nx",
                                      nullptr,     4.0, 0.5};

struct PresetEntry {
    std::string name;
    std::string summary;
    int default_res;
    std::vector<int> default_levels;
    RunResult (*fn)(const RunOptions&);
};

const std::vector<PresetEntry>& registry() {
    static const std::vector<PresetEntry> table = {
        {"wave1d-smooth", "linear advection of a sine on a uniform periodic line",
         128, {32, 64, 128, 256},
         [](const RunOptions& o) { return run_wave1d(o, false); }},
        {"wave1d-perturbed", "linear advection of a sine on a jittered periodic line",
         128, {32, 64, 128, 256},
         [](const RunOptions& o) { return run_wave1d(o, true); }},
        {"recon1d-discontinuous",
         "face-trace accuracy of the reconstruction across a split sin/cos function",
         128, {32, 64, 128, 256}, run_recon1d},
        {"burgers1d", "1-D Burgers with a smooth sine profile, pre-shock",
         256, {64, 128, 256, 512},
         [](const RunOptions& o) { return run_burgers1d(o, false); }},
        {"burgers1d-shocked", "1-D Burgers marched to the steepened profile at t=1.4",
         512, {128, 256, 512},
         [](const RunOptions& o) { return run_burgers1d(o, true); }},
        {"sod", "Sod shock tube against the exact solution, non-uniform grid",
         400, {100, 200, 400}, run_sod},
        {"blast", "two interacting blast waves between reflecting walls",
         800, {200, 400, 800}, run_blast},
        {"wave2d", "linear advection of a sine sheet on triangulations",
         16, {8, 16, 32},
         [](const RunOptions& o) { return run_scalar_mesh(o, wave2d_spec); }},
        {"burgers2d", "2-D Burgers with a sine sheet, post-steepening",
         16, {8, 16, 32},
         [](const RunOptions& o) { return run_scalar_mesh(o, burgers2d_spec); }},
        {"vortex2d", "isentropic vortex advected across a periodic box",
         20, {10, 20, 40}, run_vortex},
        {"explosion2d", "cylindrical explosion on a disk vs the radial reference",
         30, {15, 30, 60},
         [](const RunOptions& o) { return run_explosion(o, 2); }},
        {"explosion3d", "spherical explosion on a ball vs the radial reference",
         10, {10, 20},
         [](const RunOptions& o) { return run_explosion(o, 3); }},
        {"wave3d", "linear advection of a sine sheet on tetrahedral meshes",
         6, {4, 6, 8},
         [](const RunOptions& o) { return run_scalar_mesh(o, wave3d_spec); }},
        {"burgers3d", "3-D Burgers with a sine sheet, post-steepening",
         6, {4, 6, 8},
         [](const RunOptions& o) { return run_scalar_mesh(o, burgers3d_spec); }},
    };
    return table;
}

const PresetEntry& entry(const std::string& name) {
    for (const auto& e : registry())
        if (e.name == name) return e;
    throw std::invalid_argument("unknown preset: " + name);
}

double ls_fit_slope(const std::vector<double>& lh, const std::vector<double>& le) {
    const std::size_t n = lh.size();
    double mh = 0.0, me = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mh += lh[i];
        me += le[i];
    }
    mh /= n;
    me /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (lh[i] - mh) * (le[i] - me);
        den += (lh[i] - mh) * (lh[i] - mh);
    }
    return den > 0.0 ? num / den : std::nan("");
}

}  // namespace

// ---------------------------------------------------------------- RunResult

double RunResult::norm(const std::string& name) const {
    for (const auto& [k, v] : norms)
        if (k == name) return v;
    throw std::out_of_range("no norm named " + name + " in preset " + preset);
}

bool RunResult::has_norm(const std::string& name) const {
    for (const auto& [k, v] : norms)
        if (k == name) return true;
    return false;
}

double RunResult::extra_value(const std::string& name) const {
    for (const auto& [k, v] : extra)
        if (k == name) return v;
    throw std::out_of_range("no diagnostic named " + name + " in preset " + preset);
}

bool RunResult::all_flags_pass() const {
    for (const auto& [k, ok] : flags)
        if (!ok) return false;
    return !failed;
}

int ConvergenceReport::norm_index(const std::string& name) const {
    for (std::size_t i = 0; i < norm_names.size(); ++i)
        if (norm_names[i] == name) return static_cast<int>(i);
    throw std::out_of_range("no norm named " + name + " in study " + preset);
}

double ConvergenceReport::ls_slope(const std::string& name) const {
    return ls_slopes.at(norm_index(name));
}

double ConvergenceReport::finest_slope(const std::string& name) const {
    return finest_slopes.at(norm_index(name));
}

double ConvergenceReport::min_pair_slope(const std::string& name) const {
    const auto& ps = pair_slopes.at(norm_index(name));
    double lo = std::numeric_limits<double>::quiet_NaN();
    for (double s : ps)
        if (std::isnan(lo) || s < lo) lo = s;
    return lo;
}

double ConvergenceReport::finest_error(const std::string& name) const {
    return levels.back().result.norm(name);
}

// ---------------------------------------------------------------- interface

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& e : registry()) out.push_back(e.name);
        return out;
    }();
    return names;
}

bool is_preset(const std::string& name) {
    for (const auto& e : registry())
        if (e.name == name) return true;
    return false;
}

std::string preset_summary_line(const std::string& name) { return entry(name).summary; }

int preset_default_resolution(const std::string& name) { return entry(name).default_res; }

std::vector<int> preset_default_levels(const std::string& name) {
    return entry(name).default_levels;
}

RunResult run_preset(const std::string& name, const RunOptions& opts) {
    return entry(name).fn(opts);
}

ConvergenceReport convergence_study(const std::string& name,
                                    const std::vector<int>& levels,
                                    const RunOptions& opts, int jobs) {
    if (levels.size() < 3)
        throw std::invalid_argument("convergence_study needs at least 3 resolutions");
    const PresetEntry& e = entry(name);

    ConvergenceReport rep;
    rep.preset = name;
    rep.levels.resize(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i)
        rep.levels[i].resolution = levels[i];

    auto run_level = [&](std::size_t i) {
        RunOptions lo = opts;
        lo.resolution = levels[i];
        RunResult& out = rep.levels[i].result;
        try {
            out = e.fn(lo);
        } catch (const std::exception& ex) {
            out.preset = name;
            out.cells = levels[i];
            out.failed = true;
            out.fail_reason = ex.what();
        }
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < levels.size(); ++i) run_level(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < levels.size();
                 i = next.fetch_add(1))
                run_level(i);
        };
        std::vector<std::thread> pool;
        const std::size_t nt = std::min<std::size_t>(jobs, levels.size());
        pool.reserve(nt);
        for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (const auto& lv : rep.levels)
        if (lv.result.failed) rep.any_failed = true;
    for (const auto& lv : rep.levels)
        if (!lv.result.failed) {
            for (const auto& [k, v] : lv.result.norms) rep.norm_names.push_back(k);
            break;
        }

    const std::size_t nn = rep.norm_names.size(), nl = rep.levels.size();
    rep.pair_slopes.assign(nn, {});
    rep.ls_slopes.assign(nn, std::nan(""));
    rep.finest_slopes.assign(nn, std::nan(""));
    for (std::size_t ni = 0; ni < nn; ++ni) {
        const std::string& nm = rep.norm_names[ni];
        std::vector<double> lh, le;
        for (std::size_t k = 0; k + 1 < nl; ++k) {
            const RunResult& a = rep.levels[k].result;
            const RunResult& b = rep.levels[k + 1].result;
            double s = std::nan("");
            if (!a.failed && !b.failed && a.has_norm(nm) && b.has_norm(nm) &&
                a.norm(nm) > 0.0 && b.norm(nm) > 0.0)
                s = std::log(a.norm(nm) / b.norm(nm)) / std::log(a.h / b.h);
            rep.pair_slopes[ni].push_back(s);
        }
        for (const auto& lv : rep.levels) {
            const RunResult& res = lv.result;
            if (!res.failed && res.has_norm(nm) && res.norm(nm) > 0.0) {
                lh.push_back(std::log(res.h));
                le.push_back(std::log(res.norm(nm)));
            }
        }
        if (lh.size() >= 2) rep.ls_slopes[ni] = ls_fit_slope(lh, le);
        if (!rep.pair_slopes[ni].empty()) rep.finest_slopes[ni] = rep.pair_slopes[ni].back();
    }
    return rep;
}

std::string resolve_fixture_dir(const std::string& explicit_dir) {
    if (!explicit_dir.empty()) return explicit_dir;
    if (const char* env = std::getenv("WLSENO_FIXTURES"))
        if (*env) return env;
#ifdef WLSENO_FIXTURE_DIR
    return WLSENO_FIXTURE_DIR;
#else
    return "fixtures";
#endif
}

}  // namespace bench
