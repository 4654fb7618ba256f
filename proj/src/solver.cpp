#include "fracpde/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "fracpde/errors.hpp"
#include "fracpde/gamma.hpp"

namespace fracpde {

void ProblemSpec::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("ProblemSpec: horizon must be positive");
  if (time_steps < 1) throw std::invalid_argument("ProblemSpec: need at least one time step");
  if (static_cast<int>(initial.size()) != geometry.node_count()) {
    throw std::invalid_argument("ProblemSpec: initial data size does not match grid");
  }
  for (double v : initial) {
    if (!std::isfinite(v)) throw std::invalid_argument("ProblemSpec: initial data must be finite");
  }
  if (boundary == BoundaryKind::dirichlet_strong) {
    for (int i = 0; i < geometry.node_count(); ++i) {
      if (geometry.is_boundary(i) && initial[i] != 0.0) {
        throw std::invalid_argument(
            "ProblemSpec: Dirichlet data requires u0 = 0 on the boundary");
      }
    }
  }
}

namespace {

std::vector<double> combined_weights(const MultiTermOrder& order, double tau, int count) {
  std::vector<double> W(count, 0.0);
  for (const MultiTermOrder::Term& term : order.terms) {
    const L1Weights w = l1_weights(term.order, tau, count);
    for (int k = 0; k < count; ++k) W[k] += term.weight * w.b[k];
  }
  return W;
}

// Neighbor values with mirrored ghosts across the boundary. Dirichlet
// runs never evaluate the stencil at boundary nodes, so the mirror branch
// only fires for the Neumann closure.
void gather_neighbors(const GridLayout& g, const double* slice, int idx, double* nb) {
  const int ix = g.ix_of(idx);
  const int px = g.points_x();
  nb[0] = ix > 0 ? slice[idx - 1] : slice[idx + 1];
  nb[1] = ix < g.nx ? slice[idx + 1] : slice[idx - 1];
  if (g.dim == 2) {
    const int iy = g.iy_of(idx);
    nb[2] = iy > 0 ? slice[idx - px] : slice[idx + px];
    nb[3] = iy < g.ny ? slice[idx + px] : slice[idx - px];
  }
}

// One-sided discrete normal derivative at a boundary node.
double normal_difference(const DomainGeometry& geom, const double* slice, int idx) {
  const GridLayout& g = geom.layout();
  const Vec2 n = geom.outward_normal(idx);
  const int px = g.points_x();
  double acc = 0.0;
  if (n.x < 0.0) acc += n.x * (slice[idx + 1] - slice[idx]) / g.hx;
  if (n.x > 0.0) acc += n.x * (slice[idx] - slice[idx - 1]) / g.hx;
  if (g.dim == 2) {
    if (n.y < 0.0) acc += n.y * (slice[idx + px] - slice[idx]) / g.hy;
    if (n.y > 0.0) acc += n.y * (slice[idx] - slice[idx - px]) / g.hy;
  }
  return acc;
}

struct March {
  const ProblemSpec& spec;
  const GridLayout& g;
  MonotoneStencil stencil;
  std::vector<double> W;  // combined multi-term L1 weights
  double W0;
  double tau;
  std::vector<int> unknowns;  // nodes carrying a discrete equation

  explicit March(const ProblemSpec& s)
      : spec(s),
        g(s.geometry.layout()),
        stencil(build_monotone_stencil(s.op, s.geometry.layout())),
        W(combined_weights(s.order, s.horizon / s.time_steps, s.time_steps)),
        W0(W[0]),
        tau(s.horizon / s.time_steps) {
    for (int i = 0; i < g.node_count(); ++i) {
      if (spec.boundary == BoundaryKind::neumann_viscosity || !g.is_boundary(i)) {
        unknowns.push_back(i);
      }
    }
  }

  double time_node(int n) const { return spec.horizon * n / spec.time_steps; }

  // History sum_{k=1}^{n-1} W_k (u^{n-k} - u^{n-k-1}) per node.
  void history(const SpaceTimeFunction& u, int n, std::vector<double>& hist) const {
    hist.assign(g.node_count(), 0.0);
    for (int k = 1; k < n; ++k) {
      const double wk = W[k];
      const double* a = u.slice(n - k);
      const double* b = u.slice(n - k - 1);
      for (int i = 0; i < g.node_count(); ++i) hist[i] += wk * (a[i] - b[i]);
    }
  }

  double residual_at(const double* cur, const double* prev, const double* hist,
                     double t, int i, double v) const {
    double nb[4];
    gather_neighbors(g, cur, i, nb);
    const double s = stencil.residual(
        t, g.coords(i), v, v,
        std::span<const double>(nb, g.dim == 1 ? 2 : 4));
    return W0 * (v - prev[i]) + hist[i] + s;
  }

  double max_residual(const double* cur, const double* prev, const double* hist,
                      double t) const {
    double worst = 0.0;
    for (int i : unknowns) {
      worst = std::max(std::abs(residual_at(cur, prev, hist, t, i, cur[i])), worst);
    }
    return worst;
  }
};

// Strictly increasing scalar residual; secant iteration with a conservative
// first step from the diagonal Lipschitz bound.
template <typename Fn>
double scalar_root(Fn&& r, double v0, double slope_hi, double tol) {
  double v_prev = v0;
  double r_prev = r(v_prev);
  if (std::abs(r_prev) <= tol) return v_prev;
  double v = v_prev - r_prev / slope_hi;
  double rv = r(v);
  for (int it = 0; it < 128; ++it) {
    if (std::abs(rv) <= tol || v == v_prev) return v;
    double slope = (rv - r_prev) / (v - v_prev);
    if (!(slope > 0.0) || !std::isfinite(slope)) slope = slope_hi;
    v_prev = v;
    r_prev = rv;
    v = v - rv / slope;
    rv = r(v);
  }
  return v;
}

void thomas_solve(std::vector<double>& sub, std::vector<double>& diag,
                  std::vector<double>& sup, std::vector<double>& rhs,
                  std::vector<double>& out) {
  const int n = static_cast<int>(diag.size());
  for (int i = 1; i < n; ++i) {
    const double m = sub[i] / diag[i - 1];
    diag[i] -= m * sup[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  out[n - 1] = rhs[n - 1] / diag[n - 1];
  for (int i = n - 2; i >= 0; --i) {
    out[i] = (rhs[i] - sup[i] * out[i + 1]) / diag[i];
  }
}

bool linear_tridiagonal_kind(const EllipticOperator& op, int dim) {
  using Kind = EllipticOperator::Kind;
  if (dim != 1) return false;
  if (op.kind() == Kind::laplacian) return true;
  return op.kind() == Kind::reaction_shifted &&
         op.base().kind() == Kind::laplacian;
}

}  // namespace

Solution solve(const ProblemSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();

  March m(spec);
  const GridLayout& g = m.g;
  const int nodes = g.node_count();
  const int N = spec.time_steps;
  const bool neumann = spec.boundary == BoundaryKind::neumann_viscosity;

  Solution sol;
  sol.horizon = spec.horizon;
  sol.grid = g;
  sol.values = SpaceTimeFunction(N, nodes);
  std::copy(spec.initial.begin(), spec.initial.end(), sol.values.slice(0));

  const bool use_thomas = spec.stepping == Stepping::implicit_fixed_point &&
                          linear_tridiagonal_kind(spec.op, g.dim);
  const double diag_lip = m.stencil.diag_lipschitz();

  if (spec.stepping == Stepping::explicit_march && m.W0 < diag_lip * (1.0 - 1e-12)) {
    const CflBound cfl = cfl_bound(m.stencil, spec.order.terms.front().order);
    throw NumericalError("explicit step violates the CFL bound: W0 = " +
                         std::to_string(m.W0) + " < " + std::to_string(diag_lip) +
                         "; " + cfl.derivation);
  }

  const double inner_tol =
      std::min(1e-10, std::max(1e-13, 1e-13 * (m.W0 + diag_lip)));
  const double gamma_shift = spec.op.kind() == EllipticOperator::Kind::reaction_shifted
                                 ? spec.op.reaction_gamma()
                                 : 0.0;

  std::vector<double> hist;
  std::vector<double> sub(nodes), diag(nodes), sup(nodes), rhs(nodes), tmp(nodes);

  for (int n = 1; n <= N; ++n) {
    const double t = m.time_node(n);
    m.history(sol.values, n, hist);
    const double* prev = sol.values.slice(n - 1);
    double* cur = sol.values.slice(n);
    std::copy(prev, prev + nodes, cur);
    if (!neumann) {
      for (int i = 0; i < nodes; ++i) {
        if (g.is_boundary(i)) cur[i] = 0.0;
      }
    }

    int iterations = 0;
    if (spec.stepping == Stepping::explicit_march) {
      for (int i : m.unknowns) {
        double nb[4];
        gather_neighbors(g, prev, i, nb);
        const double s = m.stencil.residual(
            t, g.coords(i), prev[i], prev[i],
            std::span<const double>(nb, g.dim == 1 ? 2 : 4));
        tmp[i] = prev[i] - (hist[i] + s) / m.W0;
      }
      for (int i : m.unknowns) cur[i] = tmp[i];
      iterations = 1;
    } else if (use_thomas) {
      const double h2 = g.hx * g.hx;
      for (int i = 0; i < nodes; ++i) {
        sub[i] = sup[i] = 0.0;
        diag[i] = 1.0;
        rhs[i] = 0.0;
      }
      for (int i : m.unknowns) {
        diag[i] = m.W0 + 2.0 / h2 + gamma_shift;
        rhs[i] = m.W0 * prev[i] - hist[i];
        const int ix = g.ix_of(i);
        sub[i] = ix == 0 ? 0.0 : -1.0 / h2;
        sup[i] = ix == g.nx ? 0.0 : -1.0 / h2;
        if (neumann && ix == 0) sup[i] = -2.0 / h2;
        if (neumann && ix == g.nx) sub[i] = -2.0 / h2;
      }
      thomas_solve(sub, diag, sup, rhs, tmp);
      for (int i : m.unknowns) cur[i] = tmp[i];
      iterations = 1;
    } else {
      // nonlinear Gauss-Seidel with per-node monotone root solves
      const int max_sweeps = 200000;
      const double node_tol = 0.1 * inner_tol;
      bool converged = false;
      for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        for (int i : m.unknowns) {
          auto r = [&](double v) {
            return m.residual_at(cur, prev, hist.data(), t, i, v);
          };
          cur[i] = scalar_root(r, cur[i], m.W0 + diag_lip, node_tol);
        }
        ++iterations;
        if (m.max_residual(cur, prev, hist.data(), t) <= inner_tol) {
          converged = true;
          break;
        }
      }
      if (!converged) {
        throw NumericalError("implicit step " + std::to_string(n) +
                             " did not reach the residual tolerance within budget");
      }
    }

    sol.step_iterations.push_back(iterations);
    sol.step_residual.push_back(m.max_residual(cur, prev, hist.data(), t));

    if (neumann) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      double nd_sup = 0.0;
      for (int i = 0; i < nodes; ++i) {
        if (!g.is_boundary(i)) continue;
        const double pde_res = m.residual_at(cur, prev, hist.data(), t, i, cur[i]);
        const double nd = normal_difference(spec.geometry, cur, i);
        const BoundaryOperator env = boundary_operator_residual(pde_res, nd);
        lo = std::min(lo, env.lower);
        hi = std::max(hi, env.upper);
        nd_sup = std::max(nd_sup, std::abs(nd));
      }
      sol.neumann_lower.push_back(lo);
      sol.neumann_upper.push_back(hi);
      sol.neumann_normal.push_back(nd_sup);
    }
  }

  sol.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char note[256];
  std::snprintf(note, sizeof(note),
                "scheme=%s path=%s W0=%.6g diag_lip=%.6g inner_tol=%.3g",
                spec.stepping == Stepping::explicit_march ? "explicit" : "implicit",
                spec.stepping == Stepping::explicit_march
                    ? "forward"
                    : (use_thomas ? "tridiagonal" : "gauss-seidel"),
                m.W0, diag_lip, inner_tol);
  sol.scheme_note = note;
  return sol;
}

// ---------------------------------------------------------------------------
// Barriers
// ---------------------------------------------------------------------------

namespace {

struct BarrierOperatorBounds {
  double lip_X, lip_p, lip_w, c0, ell_low;
};

BarrierOperatorBounds barrier_bounds(const EllipticOperator& op) {
  return {op.lip_hessian(), op.lip_gradient(), op.lip_value(), op.const_bound(),
          op.ellipticity_lower()};
}

// Exterior-sphere power profile rho2(x) = C (r^{-p} - |x-z|^{-p}), normalized
// so that sup_{theta- <= A <= theta+} tr(A Hess rho2) + L_p |grad rho2| <= -2
// over the whole domain.
struct Rho2 {
  Vec2 z;
  double r, p, C;

  double operator()(Vec2 x) const {
    const double rho = (x - z).norm();
    return C * (std::pow(r, -p) - std::pow(rho, -p));
  }
};

Rho2 make_rho2(const DomainGeometry& geom, Vec2 anchor, Vec2 normal,
               const BarrierOperatorBounds& b) {
  const double r = geom.exterior_sphere_radius();
  Rho2 rho2;
  rho2.z = anchor + r * normal;
  rho2.r = r;
  double rmax = 0.0;
  for (int i = 0; i < geom.node_count(); ++i) {
    rmax = std::max(rmax, (geom.coords(i) - rho2.z).norm());
  }
  const int d = geom.dim();
  rho2.p = std::max(double(d),
                    (b.lip_X * (d - 1) + b.lip_p * rmax + b.ell_low) / b.ell_low);
  rho2.C = std::pow(rmax, rho2.p + 2.0) / (rho2.p * b.ell_low);
  return rho2;
}

double rho1_profile(double t, double s, double alpha, double horizon) {
  return (alpha * std::pow(t, 1.0 + alpha) - (1.0 + alpha) * s * std::pow(t, alpha) +
          std::pow(s, 1.0 + alpha)) /
         (gamma_fn(2.0 + alpha) * horizon);
}

}  // namespace

BarrierPair build_barriers_dirichlet(const ProblemSpec& spec,
                                     const BarrierSampling& sampling) {
  spec.validate();
  if (spec.boundary != BoundaryKind::dirichlet_strong) {
    throw std::invalid_argument("build_barriers_dirichlet: spec is not Dirichlet");
  }
  if (spec.order.terms.size() != 1) {
    throw std::invalid_argument(
        "build_barriers_dirichlet: single-order specs only; the polynomial time "
        "profile has no sign control under extra terms");
  }
  const BarrierOperatorBounds b = barrier_bounds(spec.op);
  if (!(b.ell_low > 0.0)) {
    throw std::invalid_argument(
        "build_barriers_dirichlet: operator must be uniformly elliptic (the "
        "exterior-sphere branch needs second-order decay)");
  }

  const DomainGeometry& geom = spec.geometry;
  const GridLayout& g = geom.layout();
  const double alpha = spec.order.terms.front().order.value();
  const double lam = spec.order.terms.front().weight;
  const double T = spec.horizon;
  const int nodes = geom.node_count();
  const int N = spec.time_steps;

  double m0 = 0.0;
  for (double v : spec.initial) m0 = std::max(m0, std::abs(v));
  const double beta =
      1.0 / (2.0 * (b.lip_X * geom.dim() + b.lip_p * geom.diameter()));
  const double c1_base = std::max(1.0, (b.c0 + 1.0) / lam);
  const double c2_base = std::max(1.0, (2.0 * (b.lip_w * m0 + b.c0) + 2.0) / lam);
  const double gamma_1pa = gamma_fn(1.0 + alpha);

  SpaceTimeFunction lower(N, nodes), upper(N, nodes);
  for (double& v : lower.v) v = -std::numeric_limits<double>::infinity();
  for (double& v : upper.v) v = std::numeric_limits<double>::infinity();

  std::vector<double> eps_ladder;
  const double eps0 = sampling.epsilon0 * std::max(1.0, m0);
  for (int j = 0; j < sampling.epsilon_levels; ++j) {
    eps_ladder.push_back(eps0 * std::pow(2.0, -j));
  }

  auto apply_member = [&](auto&& value_fn) {
    for (int n = 0; n <= N; ++n) {
      const double t = spec.horizon * n / N;
      for (int i = 0; i < nodes; ++i) {
        const double v = value_fn(t, geom.coords(i));
        lower.at(n, i) = std::max(lower.at(n, i), v);
      }
    }
  };
  auto apply_upper_member = [&](auto&& value_fn) {
    for (int n = 0; n <= N; ++n) {
      const double t = spec.horizon * n / N;
      for (int i = 0; i < nodes; ++i) {
        const double v = value_fn(t, geom.coords(i));
        upper.at(n, i) = std::min(upper.at(n, i), v);
      }
    }
  };

  double c1_max = 0.0, c2_max = 0.0, p_used = 0.0;

  // Boundary-anchored members.
  for (int bidx : geom.boundary_nodes()) {
    const Vec2 y = geom.coords(bidx);
    const Rho2 rho2 = make_rho2(geom, y, geom.outward_normal(bidx), b);
    p_used = rho2.p;
    for (int ms = 1; ms <= sampling.time_anchors; ++ms) {
      const double s = T * ms / sampling.time_anchors;
      const double rho1_at0 = rho1_profile(0.0, s, alpha, T);
      for (double eps : eps_ladder) {
        double scan_lo = 0.0, scan_hi = 0.0;
        for (int i = 0; i < nodes; ++i) {
          const double denom = rho1_at0 + rho2(geom.coords(i));
          scan_lo = std::max(scan_lo, (-spec.initial[i] - eps) / denom);
          scan_hi = std::max(scan_hi, (spec.initial[i] - eps) / denom);
        }
        const double c1_lo = std::max(c1_base, scan_lo);
        const double c1_hi = std::max(c1_base, scan_hi);
        c1_max = std::max({c1_max, c1_lo, c1_hi});
        apply_member([&](double t, Vec2 x) {
          return -eps - c1_lo * (rho1_profile(t, s, alpha, T) + rho2(x));
        });
        apply_upper_member([&](double t, Vec2 x) {
          return eps + c1_hi * (rho1_profile(t, s, alpha, T) + rho2(x));
        });
      }
    }
  }

  // Initial-anchored members on a sub-lattice.
  for (int i0 = 0; i0 < nodes; ++i0) {
    const int ix = g.ix_of(i0);
    const int iy = g.iy_of(i0);
    if (ix % sampling.space_stride != 0 || (g.dim == 2 && iy % sampling.space_stride != 0)) {
      continue;
    }
    const Vec2 y = geom.coords(i0);
    const double u0y = spec.initial[i0];
    for (double eps : eps_ladder) {
      double scan_lo = 0.0, scan_hi = 0.0;
      for (int i = 0; i < nodes; ++i) {
        if (i == i0) continue;
        const double d2 = [&] {
          const Vec2 dxy = geom.coords(i) - y;
          return dxy.x * dxy.x + dxy.y * dxy.y;
        }();
        scan_lo = std::max(scan_lo, 2.0 * (u0y - spec.initial[i] - eps) / (beta * d2));
        scan_hi = std::max(scan_hi, 2.0 * (spec.initial[i] - u0y - eps) / (beta * d2));
      }
      const double c2_lo = std::max(c2_base, scan_lo);
      const double c2_hi = std::max(c2_base, scan_hi);
      c2_max = std::max({c2_max, c2_lo, c2_hi});
      apply_member([&](double t, Vec2 x) {
        const Vec2 dxy = x - y;
        const double q = std::pow(t, alpha) / gamma_1pa +
                         0.5 * beta * (dxy.x * dxy.x + dxy.y * dxy.y);
        return u0y - eps - c2_lo * q;
      });
      apply_upper_member([&](double t, Vec2 x) {
        const Vec2 dxy = x - y;
        const double q = std::pow(t, alpha) / gamma_1pa +
                         0.5 * beta * (dxy.x * dxy.x + dxy.y * dxy.y);
        return u0y + eps + c2_hi * q;
      });
    }
  }

  BarrierPair out;
  out.lower = std::move(lower);
  out.upper = std::move(upper);
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "dirichlet barriers: beta=%.6g C1<=%.6g C2<=%.6g rho2_p=%.6g "
                "eps0=%.3g levels=%d operator=%s",
                beta, c1_max, c2_max, p_used, eps0, sampling.epsilon_levels,
                spec.op.name().c_str());
  out.log = buf;
  return out;
}

namespace {

// Per-axis interior profile: exact distance within a margin of each face,
// then a C^1 parabolic cap with zero slope at the midline.
double capped_axis_profile(double s, double length) {
  const double half = 0.5 * length;
  const double w = 0.25 * length;
  const double m = std::min(s, length - s);
  if (m <= w) return m;
  const double excess = m - w;
  return w + excess - excess * excess / (2.0 * (half - w));
}

}  // namespace

BarrierPair build_barriers_neumann(const ProblemSpec& spec) {
  spec.validate();
  if (spec.boundary != BoundaryKind::neumann_viscosity) {
    throw std::invalid_argument("build_barriers_neumann: spec is not Neumann");
  }
  const DomainGeometry& geom = spec.geometry;
  const int nodes = geom.node_count();
  const int N = spec.time_steps;
  const BarrierOperatorBounds b = barrier_bounds(spec.op);

  // largest order rules the time profile; other terms only push the same way
  double alpha_m = 0.0, lam_m = 1.0;
  for (const MultiTermOrder::Term& term : spec.order.terms) {
    if (term.order.value() > alpha_m) {
      alpha_m = term.order.value();
      lam_m = term.weight;
    }
  }

  auto dtilde = [&](Vec2 x) {
    double acc = capped_axis_profile(x.x, geom.length_x());
    if (geom.dim() == 2) acc += capped_axis_profile(x.y, geom.length_y());
    return acc;
  };

  double m0 = 0.0;
  for (double v : spec.initial) m0 = std::max(m0, std::abs(v));
  double dmax = 0.0;
  for (int i = 0; i < nodes; ++i) dmax = std::max(dmax, dtilde(geom.coords(i)));

  const double kappa =
      4.0 / geom.length_x() +
      (geom.dim() == 2 ? 4.0 / geom.length_y() : 0.0);  // curvature bound of dtilde
  const double big_m = m0 + dmax;
  const double big_c =
      (b.lip_X * kappa + b.lip_p * std::sqrt(double(geom.dim())) + b.c0 +
       b.lip_w * big_m + 1.0) /
      lam_m;
  const double gamma_1pa = gamma_fn(1.0 + alpha_m);

  BarrierPair out;
  out.lower = SpaceTimeFunction(N, nodes);
  out.upper = SpaceTimeFunction(N, nodes);
  for (int n = 0; n <= N; ++n) {
    const double t = spec.horizon * n / N;
    const double time_part = big_c * std::pow(t, alpha_m) / gamma_1pa;
    for (int i = 0; i < nodes; ++i) {
      const double v = -big_m - time_part + dtilde(geom.coords(i));
      out.lower.at(n, i) = v;
      out.upper.at(n, i) = -v;
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "neumann barriers: M=%.6g C=%.6g kappa=%.6g alpha_m=%.4g lam_m=%.4g",
                big_m, big_c, kappa, alpha_m, lam_m);
  out.log = buf;
  return out;
}

Solution perron_iterate(const ProblemSpec& spec, const SpaceTimeFunction& lower,
                        const SpaceTimeFunction& upper, PerronTrace* trace) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  March m(spec);
  const GridLayout& g = m.g;
  const int nodes = g.node_count();
  const int N = spec.time_steps;
  if (lower.nt != N || lower.nodes != nodes || upper.nt != N || upper.nodes != nodes) {
    throw std::invalid_argument("perron_iterate: barrier grids do not match the spec");
  }
  for (size_t i = 0; i < lower.v.size(); ++i) {
    if (!(lower.v[i] <= upper.v[i])) {
      throw std::invalid_argument("perron_iterate: lower barrier exceeds upper");
    }
  }

  Solution sol;
  sol.horizon = spec.horizon;
  sol.grid = g;
  sol.values = lower;
  std::copy(spec.initial.begin(), spec.initial.end(), sol.values.slice(0));
  const bool neumann = spec.boundary == BoundaryKind::neumann_viscosity;
  if (!neumann) {
    for (int n = 1; n <= N; ++n) {
      for (int i = 0; i < nodes; ++i) {
        if (g.is_boundary(i)) sol.values.at(n, i) = 0.0;
      }
    }
  }

  const double diag_lip = m.stencil.diag_lipschitz();
  const double stop_tol = 1e-11;
  const int max_sweeps = 50000;
  PerronTrace local;
  PerronTrace& tr = trace ? *trace : local;
  tr = PerronTrace{};
  tr.min_update = 0.0;

  std::vector<double> hist;
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_update = 0.0;
    for (int n = 1; n <= N; ++n) {
      const double t = m.time_node(n);
      m.history(sol.values, n, hist);
      const double* prev = sol.values.slice(n - 1);
      double* cur = sol.values.slice(n);
      for (int i : m.unknowns) {
        auto r = [&](double v) {
          return m.residual_at(cur, prev, hist.data(), t, i, v);
        };
        const double root = scalar_root(r, cur[i], m.W0 + diag_lip, 0.1 * stop_tol);
        const double raised = std::max(cur[i], root);  // the bump never lowers
        max_update = std::max(max_update, raised - cur[i]);
        cur[i] = raised;
      }
    }
    tr.sweep_max_update.push_back(max_update);
    ++tr.sweeps;
    tr.final_update = max_update;
    if (max_update < stop_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NumericalError("perron_iterate: sweep budget exhausted before convergence");
  }

  sol.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char note[160];
  std::snprintf(note, sizeof(note), "perron sweeps=%d final_update=%.3g", tr.sweeps,
                tr.final_update);
  sol.scheme_note = note;
  return sol;
}

}  // namespace fracpde
