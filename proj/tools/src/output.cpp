#include "bench/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bench {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

}  // namespace

void write_solution_csv(const std::string& path, const RunResult& r) {
    std::ofstream out = open_out(path);
    out << "x";
    if (r.dim >= 2) out << ",y";
    if (r.dim >= 3) out << ",z";
    out << ",measure";
    for (const auto& c : r.comp_names) out << "," << c;
    for (const auto& [name, col] : r.aux_cols) out << "," << name;
    out << "\n";
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        out << fmt(r.x[i]);
        if (r.dim >= 2) out << "," << fmt(r.y[i]);
        if (r.dim >= 3) out << "," << fmt(r.z[i]);
        out << "," << fmt(r.measure[i]);
        for (const auto& comp : r.state) out << "," << fmt(comp[i]);
        for (const auto& [name, col] : r.aux_cols) out << "," << fmt(col[i]);
        out << "\n";
    }
}

void write_convergence_csv(const std::string& path, const ConvergenceReport& rep) {
    std::ofstream out = open_out(path);
    out << "cells,h";
    for (const auto& n : rep.norm_names) out << ",err_" << n;
    for (const auto& n : rep.norm_names) out << ",slope_" << n;
    out << "\n";
    for (std::size_t k = 0; k < rep.levels.size(); ++k) {
        const RunResult& r = rep.levels[k].result;
        out << r.cells << "," << fmt(r.h);
        for (const auto& n : rep.norm_names)
            out << "," << (r.has_norm(n) ? fmt(r.norm(n)) : std::string("nan"));
        for (std::size_t ni = 0; ni < rep.norm_names.size(); ++ni) {
            out << ",";
            if (k > 0 && ni < rep.pair_slopes.size() &&
                k - 1 < rep.pair_slopes[ni].size())
                out << fmt(rep.pair_slopes[ni][k - 1]);
        }
        out << "\n";
    }
}

std::string run_summary_text(const RunResult& r) {
    std::ostringstream out;
    out << "preset = " << r.preset << "\n";
    out << "dim = " << r.dim << "\n";
    out << "cells = " << r.cells << "\n";
    out << "h = " << fmt(r.h) << "\n";
    out << "final_time = " << fmt(r.t_final) << "\n";
    out << "steps = " << r.steps << "\n";
    out << "status = " << (r.failed ? "fail" : "ok") << "\n";
    if (r.failed) {
        out << "fail_time = " << fmt(r.fail_time) << "\n";
        out << "fail_reason = " << r.fail_reason << "\n";
    }
    for (const auto& [name, v] : r.norms) out << name << " = " << fmt(v) << "\n";
    for (const auto& [name, v] : r.extra) out << name << " = " << fmt(v) << "\n";
    for (const auto& [name, ok] : r.flags)
        out << name << " = " << (ok ? "pass" : "fail") << "\n";
    return out.str();
}

void write_run_summary(const std::string& path, const RunResult& r) {
    open_out(path) << run_summary_text(r);
}

std::string study_summary_text(const ConvergenceReport& rep) {
    std::ostringstream out;
    out << "preset = " << rep.preset << "\n";
    out << "levels = " << rep.levels.size() << "\n";
    out << "status = " << (rep.any_failed ? "fail" : "ok") << "\n";
    for (std::size_t k = 0; k < rep.levels.size(); ++k) {
        const RunResult& r = rep.levels[k].result;
        out << "level_" << rep.levels[k].resolution
            << "_status = " << (r.failed ? "fail" : "ok") << "\n";
    }
    for (std::size_t ni = 0; ni < rep.norm_names.size(); ++ni) {
        const std::string& n = rep.norm_names[ni];
        if (ni < rep.ls_slopes.size())
            out << "slope_ls_" << n << " = " << fmt(rep.ls_slopes[ni]) << "\n";
        if (ni < rep.finest_slopes.size())
            out << "slope_finest_" << n << " = " << fmt(rep.finest_slopes[ni]) << "\n";
        if (ni < rep.pair_slopes.size()) {
            double lo = 0.0;
            bool first = true;
            for (double s : rep.pair_slopes[ni]) {
                if (first || s < lo) lo = s;
                first = false;
            }
            if (!first) out << "slope_min_" << n << " = " << fmt(lo) << "\n";
        }
    }
    return out.str();
}

void write_study_summary(const std::string& path, const ConvergenceReport& rep) {
    open_out(path) << study_summary_text(rep);
}

}  // namespace bench
