#include "fracpde/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fracpde/emit.hpp"
#include "fracpde/envelopes.hpp"
#include "fracpde/errors.hpp"
#include "fracpde/oracles.hpp"
#include "fracpde/verify.hpp"
#include "fracpde/version.hpp"

namespace fracpde {

namespace {

EigenMode config_mode(const RunConfig& cfg) {
  const ModeBoundary mb = cfg.u0.kind == "sin_mode" ? ModeBoundary::dirichlet
                                                    : ModeBoundary::neumann;
  if ((cfg.u0.kind != "sin_mode" && cfg.u0.kind != "cos_mode")) {
    throw ConfigError("convergence study requires a sin_mode or cos_mode u0");
  }
  if (cfg.dim == 1) return interval_mode(cfg.length_x, cfg.u0.mode_k, mb);
  return rectangle_mode(cfg.length_x, cfg.length_y, cfg.u0.mode_k, cfg.u0.mode_k, mb);
}

double sup_error_vs_mode(const Solution& sol, const DomainGeometry& geom,
                         const EigenMode& mode, FractionalOrder order,
                         double amplitude) {
  double err = 0.0;
  for (int n = 0; n <= sol.values.nt; ++n) {
    const double t = sol.horizon * n / sol.values.nt;
    for (int i = 0; i < sol.values.nodes; ++i) {
      const double exact =
          amplitude * exact_eigen_solution(mode, order, t, geom.coords(i));
      err = std::max(err, std::abs(sol.values.at(n, i) - exact));
    }
  }
  return err;
}

template <typename Fn>
auto parallel_map(int count, int threads, Fn&& fn)
    -> std::vector<decltype(fn(0))> {
  using R = decltype(fn(0));
  std::vector<R> out(count);
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::future<R>> futures;
  futures.reserve(count);
  for (int i = 0; i < count; ++i) {
    futures.push_back(std::async(std::launch::async, [&fn, i] { return fn(i); }));
  }
  for (int i = 0; i < count; ++i) out[i] = futures[i].get();
  return out;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(const RunConfig& cfg, int levels,
                                              int threads) {
  if (levels < 3) throw ConfigError("convergence study needs at least 3 levels");
  if (cfg.order_terms.size() != 1) {
    throw ConfigError("convergence study requires a single-order derivative");
  }
  const FractionalOrder order = cfg.order_terms.front().order;
  const EigenMode mode = config_mode(cfg);

  auto run_level = [&](int level) {
    RunConfig level_cfg = cfg;
    level_cfg.nt = cfg.nt << level;
    level_cfg.nx = cfg.nx << level;
    if (cfg.dim == 2) level_cfg.ny = (cfg.ny ? cfg.ny : cfg.nx) << level;
    const ProblemSpec spec = level_cfg.make_problem();
    const Solution sol = solve(spec);
    ConvergenceRow row;
    row.nt = level_cfg.nt;
    row.nx = level_cfg.nx;
    row.h = spec.geometry.layout().hx;
    row.error = sup_error_vs_mode(sol, spec.geometry, mode, order, cfg.u0.amplitude);
    row.order = std::numeric_limits<double>::quiet_NaN();
    return row;
  };

  std::vector<ConvergenceRow> rows = parallel_map(levels, threads, run_level);
  for (int l = 1; l < levels; ++l) {
    if (rows[l].error > 0.0 && rows[l - 1].error > 0.0) {
      rows[l].order = std::log2(rows[l - 1].error / rows[l].error);
    }
  }
  return rows;
}

namespace {

void write_run_record(const std::string& dir, const RunRecord& record,
                      const std::string& config_text) {
  nlohmann::json j;
  j["config_hash"] = record.config_hash;
  j["library_version"] = record.library_version;
  j["study"] = record.study;
  j["artifacts"] = record.artifacts;
  j["violations"] = record.violations;
  j["message"] = record.message;
  nlohmann::json metrics;
  for (const auto& [k, v] : record.metrics) metrics[k] = v;
  j["metrics"] = metrics;
  j["config"] = nlohmann::json::parse(config_text);
  std::ofstream out(join_path(dir, "run_record.json"), std::ios::trunc);
  out << j.dump(2) << '\n';
}

RunRecord study_solve(const RunConfig& cfg, const std::string& dir) {
  RunRecord record;
  const ProblemSpec spec = cfg.make_problem();
  const Solution sol = solve(spec);
  if (cfg.emit_csv) {
    const std::string path = join_path(dir, "solution.csv");
    emit_solution_csv(sol, spec.geometry, path, cfg.precision);
    record.artifacts.push_back(path);
  }
  if (cfg.emit_svg) {
    const std::string path = join_path(dir, "solution.svg");
    emit_solution_svg(sol, spec.geometry, path);
    record.artifacts.push_back(path);
  }
  double final_res = 0.0;
  for (double r : sol.step_residual) final_res = std::max(final_res, r);
  record.metrics.emplace_back("max_step_residual", final_res);
  record.metrics.emplace_back("wall_seconds", sol.wall_seconds);
  record.message = sol.scheme_note;
  return record;
}

RunRecord study_convergence(const RunConfig& cfg, const std::string& dir,
                            int threads) {
  RunRecord record;
  const std::vector<ConvergenceRow> rows =
      convergence_study(cfg, cfg.levels, threads);
  Table table;
  table.header = {"nt", "nx", "h", "sup_error", "empirical_order"};
  std::vector<double> hs, errs;
  for (const ConvergenceRow& r : rows) {
    table.rows.push_back(
        {double(r.nt), double(r.nx), r.h, r.error, r.order});
    hs.push_back(r.h);
    errs.push_back(std::max(r.error, 1e-300));
  }
  if (cfg.emit_csv) {
    const std::string path = join_path(dir, "convergence.csv");
    emit_table_csv(table, path, cfg.precision);
    record.artifacts.push_back(path);
  }
  const double slope = fitted_loglog_slope(hs, errs);
  if (cfg.emit_svg) {
    Table hve;
    hve.header = {"h", "error"};
    for (const ConvergenceRow& r : rows) hve.rows.push_back({r.h, r.error});
    const std::string path = join_path(dir, "convergence.svg");
    emit_loglog_svg(hve, slope, path);
    record.artifacts.push_back(path);
  }
  record.metrics.emplace_back("fitted_order", slope);
  record.metrics.emplace_back("finest_error", rows.back().error);
  return record;
}

RunRecord study_verify(const RunConfig& cfg, const std::string& dir, int threads) {
  RunRecord record;
  const ProblemSpec spec = cfg.make_problem();
  const Solution sol = solve(spec);
  double osc = 0.0;
  for (double v : sol.values.v) osc = std::max(osc, std::abs(v));
  const TestFunctionFamily family = TestFunctionFamily::default_family(spec, osc);
  const double tol = scheme_tolerance(spec, cfg.tolerance_constant * std::max(osc, 1.0));
  const ViscosityReport sub =
      check_viscosity_residuals(sol, spec, family, SolutionSide::sub, tol);
  const ViscosityReport super =
      check_viscosity_residuals(sol, spec, family, SolutionSide::super, tol);
  record.violations = static_cast<int>(
      (sub.entries.size() - std::count_if(sub.entries.begin(), sub.entries.end(),
                                          [](const auto& e) { return e.pass; })) +
      (super.entries.size() -
       std::count_if(super.entries.begin(), super.entries.end(),
                     [](const auto& e) { return e.pass; })));
  record.metrics.emplace_back("tolerance", tol);
  record.metrics.emplace_back("sub_checked", sub.checked);
  record.metrics.emplace_back("super_checked", super.checked);
  record.metrics.emplace_back("sub_worst_violation", sub.worst_violation);
  record.metrics.emplace_back("super_worst_violation", super.worst_violation);

  Table table;
  table.header = {"side", "member", "time_index", "node_index", "residual", "pass"};
  for (const auto& e : sub.entries) {
    table.rows.push_back({0.0, double(e.member), double(e.time_index),
                          double(e.node_index), e.residual, e.pass ? 1.0 : 0.0});
  }
  for (const auto& e : super.entries) {
    table.rows.push_back({1.0, double(e.member), double(e.time_index),
                          double(e.node_index), e.residual, e.pass ? 1.0 : 0.0});
  }
  if (cfg.emit_csv) {
    const std::string path = join_path(dir, "viscosity_report.csv");
    emit_table_csv(table, path, cfg.precision);
    record.artifacts.push_back(path);
  }

  if (!cfg.alphas.empty()) {
    RunConfig classical = cfg;
    classical.order_terms = {{1.0, FractionalOrder(1.0)}};
    const Solution reference = solve(classical.make_problem());
    ProblemSpec base = spec;
    const std::vector<AlphaStudyRow> study =
        alpha_limit_study(base, cfg.alphas, reference);
    Table atable;
    atable.header = {"alpha", "sup_distance"};
    for (const AlphaStudyRow& r : study) atable.rows.push_back({r.alpha, r.sup_distance});
    if (cfg.emit_csv) {
      const std::string path = join_path(dir, "alpha_study.csv");
      emit_table_csv(atable, path, cfg.precision);
      record.artifacts.push_back(path);
    }
    (void)threads;
  }
  return record;
}

RunRecord study_compare(const RunConfig& cfg, const std::string& dir,
                        std::uint64_t seed) {
  RunRecord record;
  const ProblemSpec base = cfg.make_problem();
  const DomainGeometry& geom = base.geometry;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> amp(0.05, 0.5);
  std::uniform_real_distribution<double> pos(0.25, 0.75);

  Table table;
  table.header = {"pair", "max_gap", "ordered"};
  double worst = -std::numeric_limits<double>::infinity();
  for (int pair = 0; pair < cfg.compare_pairs; ++pair) {
    ProblemSpec hi = base;
    const double a = amp(rng);
    const double cx = pos(rng) * geom.length_x();
    const double cy = pos(rng) * (geom.dim() == 2 ? geom.length_y() : 0.0);
    const double width = 0.2 * geom.length_x();
    for (int i = 0; i < geom.node_count(); ++i) {
      if (base.boundary == BoundaryKind::dirichlet_strong && geom.is_boundary(i)) {
        continue;
      }
      const Vec2 p = geom.coords(i);
      const double r2 = (std::pow(p.x - cx, 2) + std::pow(p.y - cy, 2)) /
                        (width * width);
      if (r2 < 1.0) hi.initial[i] += a * std::exp(1.0 - 1.0 / (1.0 - r2));
    }
    const Solution lo_sol = solve(base);
    const Solution hi_sol = solve(hi);
    const ComparisonResult cmp = check_comparison(lo_sol, hi_sol, 1e-12);
    double max_gap = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < lo_sol.values.v.size(); ++i) {
      max_gap = std::max(max_gap, lo_sol.values.v[i] - hi_sol.values.v[i]);
    }
    worst = std::max(worst, max_gap);
    if (!cmp.holds()) ++record.violations;
    table.rows.push_back({double(pair), max_gap, cmp.holds() ? 1.0 : 0.0});
  }
  if (cfg.emit_csv) {
    const std::string path = join_path(dir, "comparison.csv");
    emit_table_csv(table, path, cfg.precision);
    record.artifacts.push_back(path);
  }
  record.metrics.emplace_back("worst_gap", worst);
  return record;
}

RunRecord study_envelope(const RunConfig& cfg, const std::string& dir) {
  RunRecord record;
  const DomainGeometry geom = cfg.make_geometry();
  SpatialGridFunction f(geom.layout(), cfg.u0.sample(geom));
  const SpatialGridFunction sup = sup_convolution(f, cfg.envelope_eps);
  const SpatialGridFunction inf = inf_convolution(f, cfg.envelope_eps);
  const SpatialGridFunction brute = envelope_brute(f, cfg.envelope_eps,
                                                   EnvelopeKind::sup);
  int mismatches = 0;
  for (int i = 0; i < f.size(); ++i) {
    if (sup[i] != brute[i]) ++mismatches;
  }
  record.violations = mismatches;
  record.metrics.emplace_back("eps", cfg.envelope_eps);
  record.metrics.emplace_back("fast_vs_brute_mismatches", mismatches);

  Table table;
  table.header = geom.dim() == 1 ? std::vector<std::string>{"x", "f", "sup", "inf"}
                                 : std::vector<std::string>{"x", "y", "f", "sup", "inf"};
  for (int i = 0; i < f.size(); ++i) {
    const Vec2 p = geom.coords(i);
    if (geom.dim() == 1) {
      table.rows.push_back({p.x, f[i], sup[i], inf[i]});
    } else {
      table.rows.push_back({p.x, p.y, f[i], sup[i], inf[i]});
    }
  }
  if (cfg.emit_csv) {
    const std::string path = join_path(dir, "envelope.csv");
    emit_table_csv(table, path, cfg.precision);
    record.artifacts.push_back(path);
  }
  return record;
}

}  // namespace

RunRecord run_config(const std::string& config_path, const CliOptions& opts) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw ConfigError("config file not readable: " + config_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();

  RunConfig cfg = parse_config_text(text, config_path);
  if (opts.out_dir) cfg.out_dir = *opts.out_dir;
  std::filesystem::create_directories(cfg.out_dir);

  RunRecord record;
  switch (cfg.study) {
    case StudyKind::solve:
      record = study_solve(cfg, cfg.out_dir);
      record.study = "solve";
      break;
    case StudyKind::convergence:
      record = study_convergence(cfg, cfg.out_dir, opts.threads);
      record.study = "convergence";
      break;
    case StudyKind::verify:
      record = study_verify(cfg, cfg.out_dir, opts.threads);
      record.study = "verify";
      break;
    case StudyKind::compare:
      record = study_compare(cfg, cfg.out_dir, opts.seed);
      record.study = "compare";
      break;
    case StudyKind::envelope:
      record = study_envelope(cfg, cfg.out_dir);
      record.study = "envelope";
      break;
  }
  record.config_hash = config_hash(text);
  record.library_version = kVersion;
  write_run_record(cfg.out_dir, record, text);
  return record;
}

}  // namespace fracpde
