#include "fracpde/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fracpde/errors.hpp"

namespace fracpde {

using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ConfigError("config field '" + field + "': " + why);
}

double get_number(const json& j, const std::string& field, double lo, double hi) {
  if (!j.contains(field)) fail(field, "missing");
  if (!j[field].is_number()) fail(field, "expected a number");
  const double v = j[field].get<double>();
  if (!(v >= lo) || !(v <= hi)) {
    std::ostringstream os;
    os << "value " << v << " outside [" << lo << ", " << hi << "]";
    fail(field, os.str());
  }
  return v;
}

int get_int(const json& j, const std::string& field, int lo, int hi) {
  if (!j.contains(field)) fail(field, "missing");
  if (!j[field].is_number_integer()) fail(field, "expected an integer");
  const int v = j[field].get<int>();
  if (v < lo || v > hi) {
    fail(field, "value " + std::to_string(v) + " outside [" + std::to_string(lo) +
                    ", " + std::to_string(hi) + "]");
  }
  return v;
}

std::string get_string(const json& j, const std::string& field) {
  if (!j.contains(field)) fail(field, "missing");
  if (!j[field].is_string()) fail(field, "expected a string");
  return j[field].get<std::string>();
}

EllipticOperator parse_operator(const json& j) {
  const std::string kind = get_string(j, "kind");
  if (kind == "laplacian") return EllipticOperator::laplacian();
  if (kind == "pucci") {
    return EllipticOperator::pucci(get_number(j, "theta_minus", 1e-12, 1e6),
                                   get_number(j, "theta_plus", 1e-12, 1e6));
  }
  if (kind == "eikonal") {
    return EllipticOperator::eikonal(get_number(j, "speed", 0.0, 1e6));
  }
  if (kind == "bellman") {
    if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty()) {
      fail("operator.terms", "expected a non-empty array");
    }
    std::vector<EllipticOperator::LinearTerm> terms;
    for (const json& tj : j["terms"]) {
      EllipticOperator::LinearTerm term;
      if (tj.contains("diffusion")) {
        const auto d = tj["diffusion"].get<std::vector<double>>();
        for (size_t i = 0; i < d.size() && i < 2; ++i) term.diffusion[i] = d[i];
      }
      if (tj.contains("drift")) {
        const auto d = tj["drift"].get<std::vector<double>>();
        for (size_t i = 0; i < d.size() && i < 2; ++i) term.drift[i] = d[i];
      }
      term.reaction = tj.value("reaction", 0.0);
      term.source = tj.value("source", 0.0);
      terms.push_back(term);
    }
    return EllipticOperator::bellman(std::move(terms));
  }
  if (kind == "reaction_shifted") {
    if (!j.contains("base")) fail("operator.base", "missing");
    return EllipticOperator::reaction_shifted(parse_operator(j["base"]),
                                              get_number(j, "gamma", 0.0, 1e6));
  }
  fail("operator.kind", "unknown catalog operator '" + kind + "'");
}

}  // namespace

std::vector<double> InitialCondition::sample(const DomainGeometry& geom) const {
  const GridLayout& g = geom.layout();
  std::vector<double> out(g.node_count(), 0.0);
  if (kind == "zero") return out;
  if (kind == "table") {
    std::ifstream in(table_file);
    if (!in) throw ConfigError("u0 table file not readable: " + table_file);
    for (int i = 0; i < g.node_count(); ++i) {
      if (!(in >> out[i])) {
        throw ConfigError("u0 table file too short: " + table_file);
      }
    }
    return out;
  }
  for (int i = 0; i < g.node_count(); ++i) {
    const Vec2 p = g.coords(i);
    if (kind == "sin_mode") {
      double v = std::sin(mode_k * kPi * p.x / geom.length_x());
      if (g.dim == 2) v *= std::sin(mode_k * kPi * p.y / geom.length_y());
      out[i] = amplitude * v;
    } else if (kind == "cos_mode") {
      double v = std::cos(mode_k * kPi * p.x / geom.length_x());
      if (g.dim == 2) v *= std::cos(mode_k * kPi * p.y / geom.length_y());
      out[i] = amplitude * v;
    } else if (kind == "bump") {
      // compactly supported bump in the middle third; vanishes on the boundary
      double r2 = std::pow((p.x - 0.5 * geom.length_x()) / (0.3 * geom.length_x()), 2);
      if (g.dim == 2) {
        r2 += std::pow((p.y - 0.5 * geom.length_y()) / (0.3 * geom.length_y()), 2);
      }
      out[i] = r2 < 1.0 ? amplitude * std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
    } else {
      throw ConfigError("u0.kind: unknown initial condition '" + kind + "'");
    }
  }
  // sin(k pi L / L) is not exactly zero in floating point; pin the
  // Dirichlet-compatible modes on the boundary
  if (kind == "sin_mode" || kind == "bump") {
    for (int i = 0; i < g.node_count(); ++i) {
      if (g.is_boundary(i)) out[i] = 0.0;
    }
  }
  return out;
}

DomainGeometry RunConfig::make_geometry() const {
  if (dim == 1) return DomainGeometry::interval(length_x, nx);
  return DomainGeometry::rectangle(length_x, length_y, nx, ny);
}

ProblemSpec RunConfig::make_problem() const {
  ProblemSpec spec{make_geometry()};
  spec.horizon = horizon;
  spec.time_steps = nt;
  spec.order = MultiTermOrder(order_terms);
  spec.op = op;
  spec.boundary = boundary;
  spec.stepping = stepping;
  spec.initial = u0.sample(spec.geometry);
  return spec;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!root.contains("problem")) fail("problem", "missing section");
  const json& p = root["problem"];

  RunConfig cfg;

  if (!p.contains("domain")) fail("problem.domain", "missing");
  const json& dom = p["domain"];
  const std::string dkind = get_string(dom, "kind");
  if (dkind == "interval") {
    cfg.dim = 1;
    cfg.length_x = get_number(dom, "L", 1e-9, 1e9);
  } else if (dkind == "rectangle") {
    cfg.dim = 2;
    cfg.length_x = get_number(dom, "L1", 1e-9, 1e9);
    cfg.length_y = get_number(dom, "L2", 1e-9, 1e9);
  } else {
    fail("problem.domain.kind", "expected 'interval' or 'rectangle'");
  }

  cfg.horizon = get_number(p, "T", 1e-12, 1e9);

  if (p.contains("multi_term")) {
    if (!p["multi_term"].is_array() || p["multi_term"].empty()) {
      fail("problem.multi_term", "expected a non-empty array");
    }
    for (const json& tj : p["multi_term"]) {
      const double lambda = get_number(tj, "lambda", 1e-12, 1e9);
      const double alpha = get_number(tj, "alpha", 1e-12, 1.0);
      cfg.order_terms.push_back({lambda, FractionalOrder(alpha)});
    }
  } else {
    const double alpha = get_number(p, "alpha", 1e-12, 1.0);
    cfg.order_terms.push_back({1.0, FractionalOrder(alpha)});
  }

  if (!p.contains("operator")) fail("problem.operator", "missing");
  cfg.op = parse_operator(p["operator"]);

  if (p.contains("u0")) {
    const json& u0 = p["u0"];
    cfg.u0.kind = get_string(u0, "kind");
    cfg.u0.mode_k = u0.value("k", 1);
    cfg.u0.amplitude = u0.value("amplitude", 1.0);
    cfg.u0.table_file = u0.value("file", std::string{});
  }

  const std::string bkind = p.value("boundary", std::string("dirichlet_strong"));
  if (bkind == "dirichlet_strong") {
    cfg.boundary = BoundaryKind::dirichlet_strong;
  } else if (bkind == "neumann_viscosity") {
    cfg.boundary = BoundaryKind::neumann_viscosity;
  } else {
    fail("problem.boundary", "expected 'dirichlet_strong' or 'neumann_viscosity'");
  }

  if (root.contains("grid")) {
    const json& grid = root["grid"];
    cfg.nt = get_int(grid, "nt", 1, 100000000);
    cfg.nx = get_int(grid, "nx", 2, 100000000);
    cfg.ny = grid.contains("ny") ? get_int(grid, "ny", 2, 100000000) : cfg.nx;
    const std::string st = grid.value("stepping", std::string("implicit_fixed_point"));
    if (st == "implicit_fixed_point") {
      cfg.stepping = Stepping::implicit_fixed_point;
    } else if (st == "explicit") {
      cfg.stepping = Stepping::explicit_march;
    } else {
      fail("grid.stepping", "expected 'implicit_fixed_point' or 'explicit'");
    }
  }
  if (cfg.dim == 2 && cfg.ny == 0) cfg.ny = cfg.nx;

  if (root.contains("study")) {
    const json& study = root["study"];
    const std::string kind = study.value("kind", std::string("solve"));
    if (kind == "solve") {
      cfg.study = StudyKind::solve;
    } else if (kind == "convergence") {
      cfg.study = StudyKind::convergence;
    } else if (kind == "verify") {
      cfg.study = StudyKind::verify;
    } else if (kind == "compare") {
      cfg.study = StudyKind::compare;
    } else if (kind == "envelope") {
      cfg.study = StudyKind::envelope;
    } else {
      fail("study.kind", "unknown study '" + kind + "'");
    }
    cfg.levels = study.value("levels", 3);
    if (cfg.study == StudyKind::convergence && cfg.levels < 3) {
      fail("study.levels", "convergence studies need at least 3 levels");
    }
    if (study.contains("alphas")) {
      cfg.alphas = study["alphas"].get<std::vector<double>>();
      for (double a : cfg.alphas) {
        if (!(a > 0.0) || !(a <= 1.0)) fail("study.alphas", "orders must lie in (0,1]");
      }
    }
    cfg.compare_pairs = study.value("pairs", 20);
    cfg.envelope_eps = study.value("eps", 0.1);
    cfg.tolerance_constant = study.value("tolerance_constant", 2.0);
  }

  if (root.contains("output")) {
    const json& out = root["output"];
    cfg.out_dir = out.value("directory", std::string("out"));
    cfg.emit_csv = out.value("emit_csv", true);
    cfg.emit_svg = out.value("emit_svg", true);
    cfg.precision = out.value("precision", 17);
    if (cfg.precision < 1 || cfg.precision > 17) fail("output.precision", "1..17");
  }

  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config file not readable: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string config_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fracpde
