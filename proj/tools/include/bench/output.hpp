#pragma once

#include <string>

#include "bench/presets.hpp"

namespace bench {

// cells.csv-style snapshot: centroid coordinates, measure, state components,
// and reference columns when the preset carries them
void write_solution_csv(const std::string& path, const RunResult& r);

// one row per level: cells, h, error norms, consecutive-pair slopes
void write_convergence_csv(const std::string& path, const ConvergenceReport& rep);

// key = value summary of a single run
void write_run_summary(const std::string& path, const RunResult& r);
std::string run_summary_text(const RunResult& r);

// key = value summary of a study (per-norm least-squares, min-pair, and
// finest-pair slopes)
void write_study_summary(const std::string& path, const ConvergenceReport& rep);
std::string study_summary_text(const ConvergenceReport& rep);

}  // namespace bench
