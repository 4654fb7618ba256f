#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracpde/config.hpp"

namespace fracpde {

struct CliOptions {
  std::optional<std::string> out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct RunRecord {
  std::string config_hash;
  std::string library_version;
  std::string study;
  std::vector<std::string> artifacts;
  std::vector<std::pair<std::string, double>> metrics;
  int violations = 0;
  std::string message;
};

struct ConvergenceRow {
  int nt, nx;
  double h;
  double error;
  double order;  // empirical, NaN on the first level
};

/// Solves at `levels` refinements (nt, nx doubling per level) and measures
/// sup-norm errors against the eigenfunction-expansion exact solution.
/// Requires a single-order spec with a sin_mode/cos_mode initial condition.
std::vector<ConvergenceRow> convergence_study(const RunConfig& cfg, int levels,
                                              int threads = 1);

/// Loads, dispatches, and persists one study; deterministic for a fixed
/// config + seed. Writes a run_record.json next to the artifacts.
RunRecord run_config(const std::string& config_path, const CliOptions& opts);

}  // namespace fracpde
