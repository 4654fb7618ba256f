#include "fracpde/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include "fracpde/gamma.hpp"

namespace fracpde {

EllipticOperator EllipticOperator::laplacian() {
  EllipticOperator op;
  op.kind_ = Kind::laplacian;
  return op;
}

EllipticOperator EllipticOperator::pucci(double theta_minus, double theta_plus) {
  if (!(theta_minus > 0.0) || !(theta_plus >= theta_minus)) {
    throw std::invalid_argument("pucci: need 0 < theta_minus <= theta_plus");
  }
  EllipticOperator op;
  op.kind_ = Kind::pucci;
  op.theta_minus_ = theta_minus;
  op.theta_plus_ = theta_plus;
  return op;
}

EllipticOperator EllipticOperator::eikonal(double speed) {
  if (!(speed >= 0.0)) throw std::invalid_argument("eikonal: speed must be nonnegative");
  EllipticOperator op;
  op.kind_ = Kind::eikonal;
  op.speed_ = speed;
  return op;
}

EllipticOperator EllipticOperator::bellman(std::vector<LinearTerm> terms) {
  if (terms.empty()) throw std::invalid_argument("bellman: at least one term required");
  for (const LinearTerm& term : terms) {
    if (term.diffusion[0] < 0.0 || term.diffusion[1] < 0.0 || term.reaction < 0.0) {
      throw std::invalid_argument("bellman: diffusion and reaction must be nonnegative");
    }
  }
  EllipticOperator op;
  op.kind_ = Kind::bellman;
  op.terms_ = std::move(terms);
  return op;
}

EllipticOperator EllipticOperator::reaction_shifted(EllipticOperator base, double gamma) {
  if (!(gamma >= 0.0)) {
    throw std::invalid_argument("reaction_shifted: gamma must be nonnegative");
  }
  if (base.kind_ == Kind::reaction_shifted) {
    throw std::invalid_argument("reaction_shifted: base must be a plain catalog kind");
  }
  EllipticOperator op;
  op.kind_ = Kind::reaction_shifted;
  op.gamma_ = gamma;
  op.base_ = std::make_shared<EllipticOperator>(std::move(base));
  return op;
}

const EllipticOperator& EllipticOperator::base() const {
  if (!base_) throw std::logic_error("EllipticOperator::base: no base operator");
  return *base_;
}

std::string EllipticOperator::name() const {
  switch (kind_) {
    case Kind::laplacian: return "laplacian";
    case Kind::pucci: return "pucci";
    case Kind::eikonal: return "eikonal";
    case Kind::bellman: return "bellman";
    case Kind::reaction_shifted: return "reaction_shifted(" + base().name() + ")";
  }
  return "?";
}

double EllipticOperator::operator()(double t, Vec2 x, double w, Vec2 p,
                                    const SymMat2& X) const {
  switch (kind_) {
    case Kind::laplacian:
      return -X.trace();
    case Kind::pucci: {
      const auto ev = X.eigenvalues();
      double acc = 0.0;
      for (int i = 0; i < X.dim; ++i) {
        acc += std::max(-theta_minus_ * ev[i], -theta_plus_ * ev[i]);
      }
      return acc;
    }
    case Kind::eikonal:
      return p.norm() - speed_;
    case Kind::bellman: {
      double best = -std::numeric_limits<double>::infinity();
      for (const LinearTerm& term : terms_) {
        double v = -term.diffusion[0] * X.xx - term.drift[0] * p.x +
                   term.reaction * w + term.source;
        if (X.dim == 2) v += -term.diffusion[1] * X.yy - term.drift[1] * p.y;
        best = std::max(best, v);
      }
      return best;
    }
    case Kind::reaction_shifted:
      return (*base_)(t, x, w, p, X) + gamma_ * w;
  }
  return 0.0;
}

double eval_operator(const EllipticOperator& F, double t, Vec2 x, double w, Vec2 p,
                     const SymMat2& X) {
  if (!std::isfinite(w) || !std::isfinite(p.x) || !std::isfinite(p.y) ||
      !std::isfinite(X.xx) || !std::isfinite(X.xy) || !std::isfinite(X.yy)) {
    throw std::invalid_argument("eval_operator: inputs must be finite");
  }
  return F(t, x, w, p, X);
}

double EllipticOperator::lip_hessian() const {
  switch (kind_) {
    case Kind::laplacian: return 1.0;
    case Kind::pucci: return theta_plus_;
    case Kind::eikonal: return 0.0;
    case Kind::bellman: {
      double m = 0.0;
      for (const LinearTerm& t : terms_) {
        m = std::max({m, t.diffusion[0], t.diffusion[1]});
      }
      return m;
    }
    case Kind::reaction_shifted: return base().lip_hessian();
  }
  return 0.0;
}

double EllipticOperator::lip_gradient() const {
  switch (kind_) {
    case Kind::eikonal: return 1.0;
    case Kind::bellman: {
      double m = 0.0;
      for (const LinearTerm& t : terms_) {
        m = std::max(m, std::hypot(t.drift[0], t.drift[1]));
      }
      return m;
    }
    case Kind::reaction_shifted: return base().lip_gradient();
    default: return 0.0;
  }
}

double EllipticOperator::lip_value() const {
  switch (kind_) {
    case Kind::bellman: {
      double m = 0.0;
      for (const LinearTerm& t : terms_) m = std::max(m, t.reaction);
      return m;
    }
    case Kind::reaction_shifted: return base().lip_value() + gamma_;
    default: return 0.0;
  }
}

double EllipticOperator::const_bound() const {
  switch (kind_) {
    case Kind::eikonal: return speed_;
    case Kind::bellman: {
      double m = 0.0;
      for (const LinearTerm& t : terms_) m = std::max(m, std::abs(t.source));
      return m;
    }
    case Kind::reaction_shifted: return base().const_bound();
    default: return 0.0;
  }
}

double EllipticOperator::ellipticity_lower() const {
  switch (kind_) {
    case Kind::laplacian: return 1.0;
    case Kind::pucci: return theta_minus_;
    case Kind::bellman: {
      double m = std::numeric_limits<double>::infinity();
      for (const LinearTerm& t : terms_) {
        m = std::min({m, t.diffusion[0], t.diffusion[1]});
      }
      return std::isfinite(m) ? m : 0.0;
    }
    case Kind::reaction_shifted: return base().ellipticity_lower();
    default: return 0.0;
  }
}

namespace {

struct SampleDraw {
  double t, w;
  Vec2 x, p;
  SymMat2 X;
};

SampleDraw draw_sample(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SampleDraw s;
  s.t = 1e-3 + unit(rng);
  s.x = {unit(rng), dim == 2 ? unit(rng) : 0.0};
  s.w = u(rng);
  s.p = {u(rng), dim == 2 ? u(rng) : 0.0};
  s.X.dim = dim;
  s.X.xx = u(rng);
  if (dim == 2) {
    s.X.yy = u(rng);
    s.X.xy = u(rng);
  }
  return s;
}

}  // namespace

StructureReport check_degenerate_ellipticity(const OperatorFn& F, int dim, int samples,
                                             std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("check_degenerate_ellipticity: samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  StructureReport report;
  report.samples = samples;
  for (int i = 0; i < samples; ++i) {
    SampleDraw s = draw_sample(rng, dim);
    // Y = X + P P^T >= X
    SymMat2 Y = s.X;
    if (dim == 1) {
      const double p0 = u(rng);
      Y.xx += p0 * p0;
    } else {
      const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
      Y.xx += a * a + b * b;
      Y.xy += a * c + b * d;
      Y.yy += c * c + d * d;
    }
    const double fy = F(s.t, s.x, s.w, s.p, Y);
    const double fx = F(s.t, s.x, s.w, s.p, s.X);
    if (!(fy <= fx + 1e-12)) {
      report.violations.push_back({i, fy, fx});
    }
  }
  return report;
}

StructureReport check_degenerate_ellipticity(const EllipticOperator& F, int dim,
                                             int samples, std::uint64_t seed) {
  OperatorFn fn = [&F](double t, Vec2 x, double w, Vec2 p, const SymMat2& X) {
    return F(t, x, w, p, X);
  };
  return check_degenerate_ellipticity(fn, dim, samples, seed);
}

StructureReport check_value_monotonicity(const OperatorFn& F, int dim, int samples,
                                         std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("check_value_monotonicity: samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gap(0.0, 2.0);
  StructureReport report;
  report.samples = samples;
  for (int i = 0; i < samples; ++i) {
    SampleDraw s = draw_sample(rng, dim);
    const double w_hi = s.w + gap(rng);
    const double f_hi = F(s.t, s.x, w_hi, s.p, s.X);
    const double f_lo = F(s.t, s.x, s.w, s.p, s.X);
    if (!(f_hi >= f_lo - 1e-12)) {
      report.violations.push_back({i, f_hi, f_lo});
    }
  }
  return report;
}

StructureReport check_value_monotonicity(const EllipticOperator& F, int dim,
                                         int samples, std::uint64_t seed) {
  OperatorFn fn = [&F](double t, Vec2 x, double w, Vec2 p, const SymMat2& X) {
    return F(t, x, w, p, X);
  };
  return check_value_monotonicity(fn, dim, samples, seed);
}

MonotoneStencil::MonotoneStencil(const EllipticOperator& op, GridLayout grid,
                                 StencilOptions opts)
    : op_(op), grid_(grid) {
  if (op_.kind() == EllipticOperator::Kind::eikonal ||
      (op_.kind() == EllipticOperator::Kind::reaction_shifted &&
       op_.base().kind() == EllipticOperator::Kind::eikonal)) {
    lf_sigma_ = opts.lf_viscosity.value_or(1.0);  // Lipschitz bound of |p| per axis
  } else if (opts.lf_viscosity) {
    throw std::invalid_argument("StencilOptions: lf_viscosity only applies to eikonal");
  }
}

namespace {

double stencil_core(const EllipticOperator& op, const GridLayout& g, double lf_sigma,
                    double t, Vec2 x, double w, double c,
                    std::span<const double> nb) {
  using Kind = EllipticOperator::Kind;
  const int dim = g.dim;
  const double hx = g.hx;
  const double hy = g.hy;
  switch (op.kind()) {
    case Kind::laplacian: {
      double acc = -(nb[0] - 2.0 * c + nb[1]) / (hx * hx);
      if (dim == 2) acc -= (nb[2] - 2.0 * c + nb[3]) / (hy * hy);
      return acc;
    }
    case Kind::pucci: {
      const double tm = op.pucci_theta_minus();
      const double tp = op.pucci_theta_plus();
      const double dxx = (nb[0] - 2.0 * c + nb[1]) / (hx * hx);
      double acc = std::max(-tm * dxx, -tp * dxx);
      if (dim == 2) {
        const double dyy = (nb[2] - 2.0 * c + nb[3]) / (hy * hy);
        acc += std::max(-tm * dyy, -tp * dyy);
      }
      return acc;
    }
    case Kind::eikonal: {
      const double px = (nb[1] - nb[0]) / (2.0 * hx);
      const double dxm = (c - nb[0]) / hx;
      const double dxp = (nb[1] - c) / hx;
      double norm2 = px * px;
      double visc = 0.5 * lf_sigma * (dxp - dxm);
      if (dim == 2) {
        const double py = (nb[3] - nb[2]) / (2.0 * hy);
        norm2 += py * py;
        visc += 0.5 * lf_sigma * ((nb[3] - c) / hy - (c - nb[2]) / hy);
      }
      return std::sqrt(norm2) - op.eikonal_speed() - visc;
    }
    case Kind::bellman: {
      const double dxx = (nb[0] - 2.0 * c + nb[1]) / (hx * hx);
      const double dyy = dim == 2 ? (nb[2] - 2.0 * c + nb[3]) / (hy * hy) : 0.0;
      double best = -std::numeric_limits<double>::infinity();
      for (const EllipticOperator::LinearTerm& term : op.bellman_terms()) {
        double v = -term.diffusion[0] * dxx + term.reaction * w + term.source;
        // upwind the drift so neighbor coefficients stay nonpositive
        v -= term.drift[0] * (term.drift[0] >= 0.0 ? (nb[1] - c) / hx
                                                   : (c - nb[0]) / hx);
        if (dim == 2) {
          v += -term.diffusion[1] * dyy;
          v -= term.drift[1] * (term.drift[1] >= 0.0 ? (nb[3] - c) / hy
                                                     : (c - nb[2]) / hy);
        }
        best = std::max(best, v);
      }
      return best;
    }
    case Kind::reaction_shifted:
      return stencil_core(op.base(), g, lf_sigma, t, x, w, c, nb) +
             op.reaction_gamma() * w;
  }
  return 0.0;
}

}  // namespace

double MonotoneStencil::residual(double t, Vec2 x, double w, double center,
                                 std::span<const double> neighbors) const {
  return stencil_core(op_, grid_, lf_sigma_, t, x, w, center, neighbors);
}

double MonotoneStencil::diag_lipschitz() const {
  using Kind = EllipticOperator::Kind;
  const double hx2 = grid_.hx * grid_.hx;
  const double hy2 = grid_.dim == 2 ? grid_.hy * grid_.hy : 1.0;
  switch (op_.kind()) {
    case Kind::laplacian:
      return 2.0 / hx2 + (grid_.dim == 2 ? 2.0 / hy2 : 0.0);
    case Kind::pucci:
      return op_.pucci_theta_plus() *
             (2.0 / hx2 + (grid_.dim == 2 ? 2.0 / hy2 : 0.0));
    case Kind::eikonal:
      return lf_sigma_ / grid_.hx + (grid_.dim == 2 ? lf_sigma_ / grid_.hy : 0.0);
    case Kind::bellman: {
      double m = 0.0;
      for (const EllipticOperator::LinearTerm& term : op_.bellman_terms()) {
        double v = 2.0 * term.diffusion[0] / hx2 + std::abs(term.drift[0]) / grid_.hx +
                   term.reaction;
        if (grid_.dim == 2) {
          v += 2.0 * term.diffusion[1] / hy2 + std::abs(term.drift[1]) / grid_.hy;
        }
        m = std::max(m, v);
      }
      return m;
    }
    case Kind::reaction_shifted: {
      MonotoneStencil base_stencil(op_.base(), grid_, StencilOptions{});
      return base_stencil.diag_lipschitz() + op_.reaction_gamma();
    }
  }
  return 0.0;
}

int MonotoneStencil::consistency_order() const {
  using Kind = EllipticOperator::Kind;
  return op_.kind() == Kind::laplacian ? 2 : 1;
}

MonotoneStencil build_monotone_stencil(const EllipticOperator& op, GridLayout grid,
                                       StencilOptions opts) {
  if (!(grid.hx > 0.0) || (grid.dim == 2 && !(grid.hy > 0.0))) {
    throw std::invalid_argument("build_monotone_stencil: grid spacing must be positive");
  }
  return MonotoneStencil(op, grid, opts);
}

StructureReport check_monotonicity(const MonotoneStencil& stencil, int trials,
                                   std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("check_monotonicity: trials >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> bump(1e-3, 1.0);
  std::uniform_int_distribution<int> pick(0, stencil.neighbor_count() - 1);
  StructureReport report;
  report.samples = trials;
  std::vector<double> nb(stencil.neighbor_count());
  for (int i = 0; i < trials; ++i) {
    for (double& v : nb) v = u(rng);
    const double center = u(rng);
    const double w = u(rng);
    const double t = 0.01 + 0.5 * (u(rng) + 1.0);
    const Vec2 x{0.25, stencil.grid().dim == 2 ? 0.25 : 0.0};
    const double before = stencil.residual(t, x, w, center, nb);
    const int j = pick(rng);
    nb[j] += bump(rng);
    const double after = stencil.residual(t, x, w, center, nb);
    if (!(after <= before + 1e-12)) {
      report.violations.push_back({i, after, before});
    }
  }
  return report;
}

CflBound cfl_bound(const MonotoneStencil& stencil, FractionalOrder order) {
  const double alpha = order.value();
  const double lip = stencil.diag_lipschitz();
  double tau;
  if (lip <= 0.0) {
    tau = std::numeric_limits<double>::infinity();
  } else {
    tau = std::pow(gamma_fn(2.0 - alpha) / lip, 1.0 / alpha);
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "b_0 = 1/(Gamma(2-a) tau^a) >= L_diag = %.6g with a = %.6g "
                "=> tau <= (Gamma(2-a)/L_diag)^(1/a) = %.6g",
                lip, alpha, tau);
  return CflBound{tau, buf};
}

}  // namespace fracpde
