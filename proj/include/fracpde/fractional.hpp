#pragma once

#include <vector>

namespace fracpde {

/// Order alpha of a Caputo derivative; 0 < alpha <= 1. alpha = 1 is the
/// classical derivative branch of the definition.
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha);
  double value() const noexcept { return alpha_; }
  bool is_classical() const noexcept { return alpha_ == 1.0; }

 private:
  double alpha_;
};

/// Weighted sum of Caputo derivatives: sum_i lambda_i * d^{alpha_i}/dt^{alpha_i}.
/// Every lambda_i must be positive and at least one term is required.
struct MultiTermOrder {
  struct Term {
    double weight;
    FractionalOrder order;
  };

  explicit MultiTermOrder(std::vector<Term> terms);
  static MultiTermOrder single(FractionalOrder order) {
    return MultiTermOrder({{1.0, order}});
  }

  std::vector<Term> terms;
};

/// Uniform grid on [0, T] with N steps; node(n) = n*T/N.
class TimeGrid {
 public:
  TimeGrid(double horizon, int steps);
  double horizon() const noexcept { return horizon_; }
  int steps() const noexcept { return steps_; }
  double dt() const noexcept { return horizon_ / steps_; }
  double node(int n) const { return horizon_ * n / steps_; }

 private:
  double horizon_;
  int steps_;
};

/// Finite real values on a TimeGrid, piecewise-linear in between.
class TimeSeries {
 public:
  TimeSeries(TimeGrid grid, std::vector<double> values);

  template <typename Fn>
  static TimeSeries sample(TimeGrid grid, Fn&& fn) {
    std::vector<double> v(grid.steps() + 1);
    for (int n = 0; n <= grid.steps(); ++n) v[n] = fn(grid.node(n));
    return TimeSeries(grid, std::move(v));
  }

  const TimeGrid& grid() const noexcept { return grid_; }
  int size() const noexcept { return static_cast<int>(values_.size()); }
  double operator[](int n) const { return values_[n]; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Piecewise-linear reconstruction at an arbitrary time in [0, T].
  double value_at(double t) const;

 private:
  TimeGrid grid_;
  std::vector<double> values_;
};

/// L1 history weights b_k = ((k+1)^{1-a} - k^{1-a}) / (Gamma(2-a) tau^a).
/// For alpha = 1 the weights collapse to (1/tau, 0, 0, ...).
struct L1Weights {
  double alpha;
  double tau;
  std::vector<double> b;
};

L1Weights l1_weights(FractionalOrder order, double tau, int n);

/// L1 value of the Caputo derivative of the series at node n:
/// sum_{k=0}^{n-1} b_k (f_{n-k} - f_{n-k-1}). Exactly the backward
/// difference when alpha = 1.
double caputo_l1(const TimeSeries& f, FractionalOrder order, int n);
double caputo_l1(const TimeSeries& f, const L1Weights& w, int n);

/// Boundary part of the Caputo splitting: (f(t) - f(0)) / (t^a Gamma(1-a)).
/// Vanishes in the limit alpha -> 1; by convention returns 0 there.
double eval_J(double f0, double ft, FractionalOrder order, double t);

/// Difference part of the splitting over the window tau in (a, t):
///   (a/Gamma(1-a)) * Int_a^t (f(t) - f(t-tau)) tau^{-a-1} dtau,
/// with the series reconstructed piecewise-linearly and the singular
/// kernel integrated exactly on every cell. a = 0 is the limit sense:
/// the first cell's singular bracket carries an exactly vanishing
/// coefficient for Lipschitz reconstructions and is dropped.
double eval_K(const TimeSeries& f, FractionalOrder order, double a, double t);

/// Marchaud-form value at node n, using the constant extension of the
/// series before t = 0. The extension contributes exactly the J term, so
/// this is eval_J + eval_K(a=0) by the splitting identity.
double marchaud_eval(const TimeSeries& f, FractionalOrder order, int n);

/// sum_i lambda_i * caputo_l1(f, alpha_i, n).
double caputo_multi_term(const TimeSeries& f, const MultiTermOrder& orders, int n);

/// Riemann-Liouville integral I^{1-a} u (t_n) with piecewise-linear u and
/// exact cell integrals. alpha = 1 degenerates to I^0 u = u(t_n).
double rl_integral(const TimeSeries& u, FractionalOrder order, int n);

}  // namespace fracpde
