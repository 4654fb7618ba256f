#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracpde/solver.hpp"

namespace fracpde {

enum class StudyKind { solve, convergence, verify, compare, envelope };

/// Named initial-condition catalog (no expression parser by design).
struct InitialCondition {
  std::string kind = "sin_mode";  // sin_mode | cos_mode | bump | zero | table
  int mode_k = 1;
  double amplitude = 1.0;
  std::string table_file;

  std::vector<double> sample(const DomainGeometry& geom) const;
};

struct RunConfig {
  // problem
  int dim = 1;
  double length_x = 1.0, length_y = 1.0;
  double horizon = 1.0;
  std::vector<MultiTermOrder::Term> order_terms;
  EllipticOperator op = EllipticOperator::laplacian();
  InitialCondition u0;
  BoundaryKind boundary = BoundaryKind::dirichlet_strong;
  // grid
  int nt = 100, nx = 50, ny = 0;
  Stepping stepping = Stepping::implicit_fixed_point;
  // study
  StudyKind study = StudyKind::solve;
  int levels = 3;
  std::vector<double> alphas;
  int compare_pairs = 20;
  double envelope_eps = 0.1;
  double tolerance_constant = 2.0;
  // output
  std::string out_dir = "out";
  bool emit_csv = true;
  bool emit_svg = true;
  int precision = 17;

  ProblemSpec make_problem() const;
  DomainGeometry make_geometry() const;
};

/// Parses and validates a JSON run configuration. Unknown study kinds,
/// out-of-range orders, and catalog misses raise ConfigError with the
/// offending field named.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

/// FNV-1a hash of the raw config bytes, hex-encoded; identifies a run.
std::string config_hash(const std::string& text);

}  // namespace fracpde
