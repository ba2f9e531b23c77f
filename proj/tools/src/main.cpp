#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bench/config.hpp"
#include "bench/output.hpp"
#include "bench/presets.hpp"
#include "wlseno/stability.hpp"

namespace {

struct CommonArgs {
    std::string config_file, out_dir, fixtures;
    std::vector<std::string> sets;
    int degree = -1;
    double cfl = std::nan("");
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config_file, "key=value config file");
    cmd->add_option("--out", a.out_dir, "directory for CSV and summary output");
    cmd->add_option("--fixtures", a.fixtures, "fixture directory (meshes live under <dir>/meshes)");
    cmd->add_option("--degree,-p", a.degree, "reconstruction degree override");
    cmd->add_option("--cfl,-s", a.cfl, "CFL / time-step scale override");
    cmd->add_option("--set", a.sets, "extra key=value config overrides")
        ->take_all();
}

bench::Config merged_config(const CommonArgs& a) {
    bench::Config cfg;
    if (!a.config_file.empty()) cfg = bench::Config::from_file(a.config_file);
    for (const std::string& kv : a.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("--set expects key=value, got: " + kv);
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (a.degree >= 0) cfg.set("degree", std::to_string(a.degree));
    if (!std::isnan(a.cfl)) cfg.set("cfl", std::to_string(a.cfl));
    cfg.validate(bench::known_config_keys());
    return cfg;
}

std::string out_path(const std::string& dir, const std::string& file) {
    std::filesystem::create_directories(dir);
    return dir + "/" + file;
}

std::vector<int> parse_levels(const std::string& text) {
    std::vector<int> out;
    std::string cur;
    for (char ch : text + ",") {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return out;
}

void print_convergence_table(const bench::ConvergenceReport& rep) {
    std::printf("%8s %12s", "cells", "h");
    for (const auto& n : rep.norm_names)
        std::printf(" %12s %7s", ("err_" + n).c_str(), "slope");
    std::printf("\n");
    for (std::size_t k = 0; k < rep.levels.size(); ++k) {
        const bench::RunResult& r = rep.levels[k].result;
        std::printf("%8d %12.5e", r.cells, r.h);
        for (std::size_t ni = 0; ni < rep.norm_names.size(); ++ni) {
            if (r.failed || !r.has_norm(rep.norm_names[ni])) {
                std::printf(" %12s %7s", "failed", "-");
                continue;
            }
            std::printf(" %12.5e", r.norm(rep.norm_names[ni]));
            const double s = k > 0 ? rep.pair_slopes[ni][k - 1] : std::nan("");
            if (std::isnan(s))
                std::printf(" %7s", "-");
            else
                std::printf(" %7.3f", s);
        }
        std::printf("\n");
        if (r.failed) std::printf("    level %d failed: %s\n", rep.levels[k].resolution,
                                  r.fail_reason.c_str());
    }
}

wlseno::LinearScheme named_scheme(const std::string& name) {
    if (name == "five") return wlseno::scheme_from_wls(5, {1, 1, 1, 1, 1}, 4);
    if (name == "seven")
        return wlseno::scheme_from_wls(
            7, {1.0 / 9.0, 0.25, 1.0, 1.5, 1.0, 0.25, 1.0 / 9.0}, 4);
    throw std::invalid_argument("scheme must be five or seven, got " + name);
}

void write_spectrum_csv(const std::string& path, const wlseno::SpectrumPoints& pts,
                        const char* param_name) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    char buf[128];
    out << param_name << ",re,im\n";
    for (std::size_t i = 0; i < pts.param.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", pts.param[i],
                      pts.value[i].real(), pts.value[i].imag());
        out << buf;
    }
}

int cmd_run(const std::string& preset, int resolution, const CommonArgs& args) {
    bench::RunOptions opts;
    opts.resolution = resolution;
    opts.config = merged_config(args);
    opts.fixture_dir = args.fixtures;
    const bench::RunResult r = bench::run_preset(preset, opts);
    std::cout << bench::run_summary_text(r);
    if (!args.out_dir.empty()) {
        bench::write_solution_csv(out_path(args.out_dir, preset + "_solution.csv"), r);
        bench::write_run_summary(out_path(args.out_dir, preset + "_summary.txt"), r);
    }
    return r.failed || !r.all_flags_pass() ? 1 : 0;
}

int cmd_converge(const std::string& preset, const std::string& levels_text, int jobs,
                 const CommonArgs& args) {
    bench::RunOptions opts;
    opts.config = merged_config(args);
    opts.fixture_dir = args.fixtures;
    const std::vector<int> levels = levels_text.empty()
                                        ? bench::preset_default_levels(preset)
                                        : parse_levels(levels_text);
    const bench::ConvergenceReport rep =
        bench::convergence_study(preset, levels, opts, jobs);
    print_convergence_table(rep);
    std::cout << bench::study_summary_text(rep);
    if (!args.out_dir.empty()) {
        bench::write_convergence_csv(out_path(args.out_dir, preset + "_convergence.csv"),
                                     rep);
        bench::write_study_summary(out_path(args.out_dir, preset + "_study_summary.txt"),
                                   rep);
    }
    return rep.any_failed ? 1 : 0;
}

int cmd_stability(const std::string& scheme, bool emit, int samples,
                  const std::string& out_dir) {
    const wlseno::LinearScheme s = named_scheme(scheme);
    const double sigma = wlseno::max_cfl(s, samples);
    std::printf("scheme = %s\n", scheme.c_str());
    std::printf("stencil = %d\n", static_cast<int>(s.c.size()) - 1);
    std::printf("flux_coefficients = %d\n", static_cast<int>(s.c.size()));
    std::printf("max_cfl = %.6f\n", sigma);
    for (std::size_t j = 0; j < s.c.size(); ++j)
        std::printf("coeff_%+d = %.17g\n", s.offset[j], s.c[j]);
    if (emit) {
        const std::string dir = out_dir.empty() ? "." : out_dir;
        const auto spec = wlseno::discrete_spectrum(s, samples);
        write_spectrum_csv(out_path(dir, scheme + "_spectrum.csv"), spec, "theta");
        write_spectrum_csv(out_path(dir, "rk3_boundary.csv"),
                           wlseno::stability_boundary(samples), "phi");
        std::printf("spectrum_csv = %s\n", (dir + "/" + scheme + "_spectrum.csv").c_str());
        std::printf("boundary_csv = %s\n", (dir + "/rk3_boundary.csv").c_str());
    }
    return 0;
}

int cmd_list() {
    for (const std::string& name : bench::preset_names()) {
        const std::vector<int> lv = bench::preset_default_levels(name);
        std::string levels;
        for (std::size_t i = 0; i < lv.size(); ++i)
            levels += (i ? "," : "") + std::to_string(lv[i]);
        std::printf("%-22s %s (default resolution %d, levels %s)\n", name.c_str(),
                    bench::preset_summary_line(name).c_str(),
                    bench::preset_default_resolution(name), levels.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-volume WLS-ENO benchmark driver"};
    app.require_subcommand(1);

    std::string run_preset_name, conv_preset_name, levels_text, scheme = "five";
    int resolution = 0, jobs = 1, samples = 4096;
    bool emit_spectrum = false;
    CommonArgs run_args, conv_args;
    std::string stab_out;

    CLI::App* run = app.add_subcommand("run", "integrate one preset and report errors");
    run->add_option("preset", run_preset_name, "preset name (see `list`)")->required();
    run->add_option("--resolution,-n", resolution, "cells / mesh refinement index");
    add_common(run, run_args);

    CLI::App* conv = app.add_subcommand("converge", "run a preset across resolutions");
    conv->add_option("preset", conv_preset_name, "preset name (see `list`)")->required();
    conv->add_option("--levels", levels_text, "comma-separated resolutions (>= 3)");
    conv->add_option("--jobs,-j", jobs, "concurrent level runs");
    add_common(conv, conv_args);

    CLI::App* stab = app.add_subcommand("stability", "linear scheme spectrum and CFL");
    stab->add_option("--scheme", scheme, "five or seven")->required();
    stab->add_flag("--emit-spectrum", emit_spectrum, "write spectrum and boundary CSVs");
    stab->add_option("--samples", samples, "Fourier samples");
    stab->add_option("--out", stab_out, "directory for emitted CSVs");

    app.add_subcommand("list", "list presets");

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(run_preset_name, resolution, run_args);
        if (conv->parsed())
            return cmd_converge(conv_preset_name, levels_text, jobs, conv_args);
        if (stab->parsed()) return cmd_stability(scheme, emit_spectrum, samples, stab_out);
        return cmd_list();
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
