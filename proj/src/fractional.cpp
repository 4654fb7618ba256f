#include "fracpde/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fracpde/gamma.hpp"

namespace fracpde {

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !(alpha <= 1.0)) {
    throw std::invalid_argument("FractionalOrder: alpha must lie in (0, 1], got " +
                                std::to_string(alpha));
  }
}

MultiTermOrder::MultiTermOrder(std::vector<Term> t) : terms(std::move(t)) {
  if (terms.empty()) {
    throw std::invalid_argument("MultiTermOrder: at least one term required");
  }
  for (const Term& term : terms) {
    if (!(term.weight > 0.0)) {
      throw std::invalid_argument("MultiTermOrder: weights must be positive");
    }
  }
}

TimeGrid::TimeGrid(double horizon, int steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
  if (steps < 1) throw std::invalid_argument("TimeGrid: need at least one step");
}

TimeSeries::TimeSeries(TimeGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.steps() + 1) {
    throw std::invalid_argument("TimeSeries: expected N+1 values");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("TimeSeries: values must be finite");
  }
}

double TimeSeries::value_at(double t) const {
  if (t < 0.0 || t > grid_.horizon() * (1.0 + 1e-12)) {
    throw std::out_of_range("TimeSeries::value_at: t outside [0, T]");
  }
  const double tau = grid_.dt();
  int j = static_cast<int>(std::floor(t / tau));
  j = std::clamp(j, 0, grid_.steps() - 1);
  const double theta = (t - grid_.node(j)) / tau;
  return values_[j] + theta * (values_[j + 1] - values_[j]);
}

L1Weights l1_weights(FractionalOrder order, double tau, int n) {
  if (!(tau > 0.0)) throw std::invalid_argument("l1_weights: tau must be positive");
  if (n < 1) throw std::invalid_argument("l1_weights: n must be at least 1");
  const double alpha = order.value();
  L1Weights w{alpha, tau, std::vector<double>(n)};
  if (order.is_classical()) {
    w.b[0] = 1.0 / tau;
    for (int k = 1; k < n; ++k) w.b[k] = 0.0;
    return w;
  }
  const double scale = 1.0 / (gamma_fn(2.0 - alpha) * std::pow(tau, alpha));
  for (int k = 0; k < n; ++k) {
    w.b[k] = (std::pow(k + 1.0, 1.0 - alpha) - std::pow(double(k), 1.0 - alpha)) * scale;
  }
  return w;
}

double caputo_l1(const TimeSeries& f, const L1Weights& w, int n) {
  if (n < 1 || n > f.grid().steps()) {
    throw std::out_of_range("caputo_l1: node index out of range");
  }
  if (static_cast<int>(w.b.size()) < n) {
    throw std::invalid_argument("caputo_l1: weight table shorter than n");
  }
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    acc += w.b[k] * (f[n - k] - f[n - k - 1]);
  }
  return acc;
}

double caputo_l1(const TimeSeries& f, FractionalOrder order, int n) {
  return caputo_l1(f, l1_weights(order, f.grid().dt(), std::max(n, 1)), n);
}

double eval_J(double f0, double ft, FractionalOrder order, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("eval_J: t must be positive");
  if (order.is_classical()) return 0.0;  // Gamma(0) pole; J vanishes in the limit
  const double alpha = order.value();
  return (ft - f0) / (std::pow(t, alpha) * gamma_fn(1.0 - alpha));
}

double eval_K(const TimeSeries& f, FractionalOrder order, double a, double t) {
  const double alpha = order.value();
  if (order.is_classical()) {
    throw std::domain_error("eval_K: undefined for alpha = 1");
  }
  if (!(a >= 0.0) || !(a < t) || t > f.grid().horizon() * (1.0 + 1e-12)) {
    throw std::invalid_argument("eval_K: need 0 <= a < t <= T");
  }

  const double ft = f.value_at(t);

  // Breakpoints in tau where the reconstruction of f(t - tau) changes slope:
  // tau = t - t_j for grid nodes t_j in (0, t - a), plus the window ends.
  std::vector<double> taus;
  taus.push_back(a);
  for (int j = f.grid().steps(); j >= 0; --j) {
    const double tau = t - f.grid().node(j);
    if (tau > a && tau < t) {
      if (tau > taus.back()) taus.push_back(tau);
    }
  }
  if (t > taus.back()) taus.push_back(t);

  double acc = 0.0;
  for (size_t c = 0; c + 1 < taus.size(); ++c) {
    const double lo = taus[c];
    const double hi = taus[c + 1];
    const double vlo = (lo == 0.0) ? ft : f.value_at(t - lo);
    const double vhi = f.value_at(t - hi);
    const double mu = (vhi - vlo) / (hi - lo);
    // Integrand on the cell: (ft - vlo - mu (tau - lo)) tau^{-a-1}.
    if (lo > 0.0) {
      const double coeff = (ft - vlo) + mu * lo;
      acc += coeff * (std::pow(lo, -alpha) - std::pow(hi, -alpha)) / alpha;
    }
    // lo == 0: the bracket's coefficient is identically zero for the
    // reconstruction, which realizes the limit sense of the a = 0 window.
    acc -= mu * (std::pow(hi, 1.0 - alpha) - std::pow(lo, 1.0 - alpha)) / (1.0 - alpha);
  }
  return alpha / gamma_fn(1.0 - alpha) * acc;
}

double marchaud_eval(const TimeSeries& f, FractionalOrder order, int n) {
  if (n < 1 || n > f.grid().steps()) {
    throw std::out_of_range("marchaud_eval: node index out of range");
  }
  const double t = f.grid().node(n);
  // Constant extension before t = 0 integrates to exactly the J term.
  return eval_J(f[0], f[n], order, t) + eval_K(f, order, 0.0, t);
}

double caputo_multi_term(const TimeSeries& f, const MultiTermOrder& orders, int n) {
  double acc = 0.0;
  for (const MultiTermOrder::Term& term : orders.terms) {
    acc += term.weight * caputo_l1(f, term.order, n);
  }
  return acc;
}

double rl_integral(const TimeSeries& u, FractionalOrder order, int n) {
  if (n < 1 || n > u.grid().steps()) {
    throw std::out_of_range("rl_integral: node index out of range");
  }
  if (order.is_classical()) return u[n];  // I^0 convention
  const double alpha = order.value();
  const double tn = u.grid().node(n);
  double acc = 0.0;
  // Cell [t_j, t_{j+1}] in s maps to sigma = t_n - s in [t_n - t_{j+1}, t_n - t_j].
  for (int j = 0; j < n; ++j) {
    const double slo = u.grid().node(j);
    const double shi = u.grid().node(j + 1);
    const double lo = tn - shi;
    const double hi = tn - slo;
    const double m = (u[j] - u[j + 1]) / (hi - lo);  // slope of u in sigma
    const double c0 = u[j + 1] - m * lo;
    acc += c0 * (std::pow(hi, 1.0 - alpha) - std::pow(lo, 1.0 - alpha)) / (1.0 - alpha);
    acc += m * (std::pow(hi, 2.0 - alpha) - std::pow(lo, 2.0 - alpha)) / (2.0 - alpha);
  }
  return acc / gamma_fn(1.0 - alpha);
}

}  // namespace fracpde
