#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bench/config.hpp"

namespace bench {

// Snapshot plus scalar diagnostics from one preset run.  `norms` holds the
// error measures a convergence study tracks; `extra` holds one-off
// diagnostics (TV, overshoot, step counts); `flags` holds the per-run
// pass/fail checks the preset defines for itself.
struct RunResult {
    std::string preset;
    int dim = 1;
    int cells = 0;
    double h = 0.0;       // representative spacing: (total measure / cells)^(1/dim)
    double t_final = 0.0;
    int steps = 0;
    bool failed = false;          // admissibility loss or preset-specific failure
    double fail_time = 0.0;
    std::string fail_reason;

    std::vector<std::pair<std::string, double>> norms;
    std::vector<std::pair<std::string, double>> extra;
    std::vector<std::pair<std::string, bool>> flags;

    // snapshot for the solution CSV: cell coordinates (y/z unused below the
    // run's dimension), cell measure, state components, and any per-cell
    // auxiliary columns (reference values and the like)
    std::vector<std::string> comp_names;
    std::vector<double> x, y, z, measure;
    std::vector<std::vector<double>> state;
    std::vector<std::pair<std::string, std::vector<double>>> aux_cols;

    double norm(const std::string& name) const;
    bool has_norm(const std::string& name) const;
    double extra_value(const std::string& name) const;
    bool all_flags_pass() const;
};

struct ConvergenceLevel {
    int resolution = 0;
    RunResult result;
};

struct ConvergenceReport {
    std::string preset;
    std::vector<ConvergenceLevel> levels;
    std::vector<std::string> norm_names;

    // slope between consecutive levels: log(e_k/e_{k+1}) / log(h_k/h_{k+1});
    // pair_slopes[n][k] pairs levels k and k+1 for norm n
    std::vector<std::vector<double>> pair_slopes;
    std::vector<double> ls_slopes;      // least-squares fit of log e vs log h
    std::vector<double> finest_slopes;  // slope of the finest pair
    bool any_failed = false;

    int norm_index(const std::string& name) const;
    double ls_slope(const std::string& name) const;
    double finest_slope(const std::string& name) const;
    double min_pair_slope(const std::string& name) const;
    double finest_error(const std::string& name) const;
};

struct RunOptions {
    int resolution = 0;     // 0 keeps the preset default
    Config config;          // merged file + command-line overrides
    std::string fixture_dir;
};

const std::vector<std::string>& preset_names();
bool is_preset(const std::string& name);
std::string preset_summary_line(const std::string& name);
int preset_default_resolution(const std::string& name);
std::vector<int> preset_default_levels(const std::string& name);

RunResult run_preset(const std::string& name, const RunOptions& opts);

// runs every level, propagating failures without aborting the rest;
// jobs > 1 runs levels in separate threads
ConvergenceReport convergence_study(const std::string& name,
                                    const std::vector<int>& levels,
                                    const RunOptions& opts, int jobs = 1);

// fixture lookup order: explicit dir, WLSENO_FIXTURES env var, build-time default
std::string resolve_fixture_dir(const std::string& explicit_dir);

}  // namespace bench
