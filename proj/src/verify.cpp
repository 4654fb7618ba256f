#include "fracpde/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracpde/fractional.hpp"
#include "fracpde/gamma.hpp"

namespace fracpde {

double QuadraticTestFunction::value(double t, Vec2 x) const {
  const Vec2 d = x - x0;
  double quad = hessian.xx * d.x * d.x;
  if (hessian.dim == 2) {
    quad += 2.0 * hessian.xy * d.x * d.y + hessian.yy * d.y * d.y;
  }
  return time_slope * (t - t0) + dot(gradient, d) + 0.5 * quad;
}

TestFunctionFamily TestFunctionFamily::default_family(const ProblemSpec& spec,
                                                      double value_scale,
                                                      int anchors_t, int anchors_x) {
  const DomainGeometry& geom = spec.geometry;
  const double scale = std::max(value_scale, 1e-8);
  const double lx = geom.length_x();
  const double a_scale = scale / spec.horizon;
  const double p_scale = scale / lx;
  const double x_scale = 4.0 * scale / (lx * lx);
  const int dim = geom.dim();

  TestFunctionFamily fam;
  const double slopes[] = {-a_scale, 0.0, a_scale};
  const double grads[] = {-p_scale, 0.0, p_scale};
  const double curvs[] = {-x_scale, -0.25 * x_scale, 0.0, 0.25 * x_scale, x_scale};

  std::vector<double> t_anchors, x_anchors, y_anchors;
  for (int i = 0; i < anchors_t; ++i) {
    t_anchors.push_back(spec.horizon * (i + 1) / anchors_t);
  }
  for (int i = 0; i < anchors_x; ++i) {
    x_anchors.push_back(lx * (i + 0.5) / anchors_x);
    if (dim == 2) y_anchors.push_back(geom.length_y() * (i + 0.5) / anchors_x);
  }
  if (dim == 1) y_anchors.push_back(0.0);

  for (double t0 : t_anchors) {
    for (double x0 : x_anchors) {
      for (double y0 : y_anchors) {
        for (double a : slopes) {
          for (double p : grads) {
            for (double c : curvs) {
              QuadraticTestFunction q;
              q.time_slope = a;
              q.gradient = {p, 0.0};
              q.hessian.dim = dim;
              q.hessian.xx = c;
              if (dim == 2) q.hessian.yy = c;
              q.t0 = t0;
              q.x0 = {x0, y0};
              fam.members.push_back(q);
            }
          }
        }
      }
    }
  }
  // the zero quadratic is part of the contract
  QuadraticTestFunction zero;
  zero.hessian.dim = dim;
  fam.members.push_back(zero);
  return fam;
}

namespace {

// J + K of the (possibly multi-term) derivative applied to the solution's own
// time series at a node; classical terms contribute the backward difference.
double time_operator_on_series(const TimeSeries& series, const MultiTermOrder& order,
                               int n) {
  double acc = 0.0;
  const double t = series.grid().node(n);
  for (const MultiTermOrder::Term& term : order.terms) {
    if (term.order.is_classical()) {
      acc += term.weight * (series[n] - series[n - 1]) / series.grid().dt();
    } else {
      acc += term.weight * (eval_J(series[0], series[n], term.order, t) +
                            eval_K(series, term.order, 0.0, t));
    }
  }
  return acc;
}

TimeSeries node_series(const SpaceTimeFunction& u, double horizon, int node) {
  std::vector<double> vals(u.nt + 1);
  for (int n = 0; n <= u.nt; ++n) vals[n] = u.at(n, node);
  return TimeSeries(TimeGrid(horizon, u.nt), std::move(vals));
}

ViscosityReport run_residual_check(const SpaceTimeFunction& u, double horizon,
                                   const ProblemSpec& spec,
                                   const TestFunctionFamily& family,
                                   SolutionSide side, double tol) {
  const GridLayout& g = spec.geometry.layout();
  const int nodes = g.node_count();
  if (u.nodes != nodes || u.nt != spec.time_steps) {
    throw std::invalid_argument("check_viscosity_residuals: grid mismatch");
  }
  const double sign = side == SolutionSide::sub ? 1.0 : -1.0;

  ViscosityReport report;
  for (int midx = 0; midx < static_cast<int>(family.members.size()); ++midx) {
    const QuadraticTestFunction& phi = family.members[midx];
    // locate the grid extremum of sign*(u - phi) over the whole grid
    double best = -std::numeric_limits<double>::infinity();
    int best_n = 0, best_i = 0;
    for (int n = 0; n <= u.nt; ++n) {
      const double t = horizon * n / u.nt;
      for (int i = 0; i < nodes; ++i) {
        const double val = sign * (u.at(n, i) - phi.value(t, g.coords(i)));
        if (val > best) {
          best = val;
          best_n = n;
          best_i = i;
        }
      }
    }
    if (best_n == 0 || g.is_boundary(best_i)) {
      ++report.skipped;
      continue;
    }
    const double t = horizon * best_n / u.nt;
    const TimeSeries series = node_series(u, horizon, best_i);
    const double nonlocal = time_operator_on_series(series, spec.order, best_n);
    const double f_val =
        spec.op(t, g.coords(best_i), u.at(best_n, best_i), phi.gradient, phi.hessian);
    const double residual = nonlocal + f_val;
    const bool pass = side == SolutionSide::sub ? residual <= tol : residual >= -tol;
    if (!pass) {
      const double beyond = side == SolutionSide::sub ? residual - tol : -tol - residual;
      report.worst_violation = std::max(report.worst_violation, beyond);
    }
    report.entries.push_back({midx, best_n, best_i, residual, pass});
    ++report.checked;
  }
  return report;
}

}  // namespace

ViscosityReport check_viscosity_residuals(const Solution& u, const ProblemSpec& spec,
                                          const TestFunctionFamily& family,
                                          SolutionSide side, double tol) {
  return run_residual_check(u.values, u.horizon, spec, family, side, tol);
}

ViscosityReport check_viscosity_residuals(const SpaceTimeFunction& u,
                                          const ProblemSpec& spec,
                                          const TestFunctionFamily& family,
                                          SolutionSide side, double tol) {
  return run_residual_check(u, spec.horizon, spec, family, side, tol);
}

double scheme_tolerance(const ProblemSpec& spec, double calibration_constant) {
  double alpha_max = 0.0;
  for (const MultiTermOrder::Term& term : spec.order.terms) {
    alpha_max = std::max(alpha_max, term.order.value());
  }
  const double tau = spec.horizon / spec.time_steps;
  const GridLayout& g = spec.geometry.layout();
  const double h = std::max(g.hx, g.dim == 2 ? g.hy : 0.0);
  const MonotoneStencil stencil = build_monotone_stencil(spec.op, g);
  return calibration_constant *
         (std::pow(tau, 2.0 - alpha_max) + std::pow(h, stencil.consistency_order()));
}

ComparisonResult check_comparison(const Solution& u, const Solution& v, double tol) {
  if (u.values.nt != v.values.nt || u.values.nodes != v.values.nodes) {
    throw std::invalid_argument("check_comparison: grid mismatch");
  }
  const int nt = u.values.nt;
  const int nodes = u.values.nodes;

  ComparisonResult result;
  result.boundary_ordered = true;
  // parabolic boundary: the t=0 slice plus every spatial boundary node
  for (int i = 0; i < nodes; ++i) {
    if (u.values.at(0, i) > v.values.at(0, i) + tol) result.boundary_ordered = false;
  }
  for (int n = 1; n <= nt && result.boundary_ordered; ++n) {
    for (int i = 0; i < nodes; ++i) {
      if (u.grid.is_boundary(i) && u.values.at(n, i) > v.values.at(n, i) + tol) {
        result.boundary_ordered = false;
        break;
      }
    }
  }

  result.everywhere_ordered = true;
  for (int n = 0; n <= nt && result.everywhere_ordered; ++n) {
    for (int i = 0; i < nodes; ++i) {
      if (u.values.at(n, i) > v.values.at(n, i) + tol) {
        result.everywhere_ordered = false;
        ComparisonResult::Witness w{};
        w.time_index = n;
        w.node_index = i;
        w.gap = u.values.at(n, i) - v.values.at(n, i);
        result.witness = w;
        break;
      }
    }
  }

  if (result.witness) {
    // J[u-v] at the global maximum of the difference: the sign mechanism.
    double best = -std::numeric_limits<double>::infinity();
    int best_n = 0, best_i = 0;
    for (int n = 0; n <= nt; ++n) {
      for (int i = 0; i < nodes; ++i) {
        const double gap = u.values.at(n, i) - v.values.at(n, i);
        if (gap > best) {
          best = gap;
          best_n = n;
          best_i = i;
        }
      }
    }
    if (best_n > 0) {
      const double d0 = u.values.at(0, best_i) - v.values.at(0, best_i);
      const double dn = u.values.at(best_n, best_i) - v.values.at(best_n, best_i);
      const double t = u.horizon * best_n / nt;
      // alpha is not recorded in Solution; J's sign is alpha-free, so 0.5 works
      result.witness->j_of_difference = eval_J(d0, dn, FractionalOrder(0.5), t);
    } else {
      result.witness->j_of_difference = 0.0;
    }
  }
  return result;
}

std::vector<AlphaStudyRow> alpha_limit_study(const ProblemSpec& base,
                                             const std::vector<double>& alphas,
                                             const Solution& classical_reference) {
  for (size_t i = 1; i < alphas.size(); ++i) {
    if (!(alphas[i] > alphas[i - 1])) {
      throw std::invalid_argument("alpha_limit_study: alphas must increase");
    }
  }
  std::vector<AlphaStudyRow> table;
  for (double alpha : alphas) {
    ProblemSpec spec = base;
    spec.order = MultiTermOrder::single(FractionalOrder(alpha));
    const Solution sol = solve(spec);
    if (sol.values.v.size() != classical_reference.values.v.size()) {
      throw std::invalid_argument("alpha_limit_study: reference grid mismatch");
    }
    double dist = 0.0;
    for (size_t i = 0; i < sol.values.v.size(); ++i) {
      dist = std::max(dist, std::abs(sol.values.v[i] - classical_reference.values.v[i]));
    }
    table.push_back({alpha, dist});
  }
  return table;
}

}  // namespace fracpde
