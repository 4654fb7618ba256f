#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fracpde/fractional.hpp"
#include "fracpde/gamma.hpp"
#include "fracpde/oracles.hpp"

using namespace fracpde;

namespace {

TimeSeries sampled(double horizon, int steps, double (*fn)(double)) {
  return TimeSeries::sample(TimeGrid(horizon, steps), fn);
}

}  // namespace

TEST_CASE("order validation") {
  CHECK_THROWS_AS(FractionalOrder(0.0), std::invalid_argument);
  CHECK_THROWS_AS(FractionalOrder(1.5), std::invalid_argument);
  CHECK_THROWS_AS(FractionalOrder(-0.2), std::invalid_argument);
  CHECK(FractionalOrder(1.0).is_classical());
  CHECK_THROWS_AS(MultiTermOrder({}), std::invalid_argument);
  CHECK_THROWS_AS(MultiTermOrder({{-1.0, FractionalOrder(0.5)}}), std::invalid_argument);
}

TEST_CASE("l1 weights collapse at alpha = 1") {
  const L1Weights w = l1_weights(FractionalOrder(1.0), 0.1, 3);
  CHECK(w.b[0] == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(w.b[1] == 0.0);
  CHECK(w.b[2] == 0.0);
}

TEST_CASE("l1 weights at alpha = 0.5, tau = 1") {
  const L1Weights w = l1_weights(FractionalOrder(0.5), 1.0, 2);
  CHECK(w.b[0] == doctest::Approx(1.0 / gamma_fn(1.5)).epsilon(1e-13));
  CHECK(w.b[0] == doctest::Approx(1.1283792).epsilon(1e-6));
  CHECK(w.b[1] == doctest::Approx((std::sqrt(2.0) - 1.0) / gamma_fn(1.5)).epsilon(1e-13));
  CHECK(w.b[1] == doctest::Approx(0.4673901).epsilon(1e-6));
}

TEST_CASE("l1 weights decrease strictly for alpha below one") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> a(0.05, 0.95);
  for (int rep = 0; rep < 20; ++rep) {
    const L1Weights w = l1_weights(FractionalOrder(a(rng)), 0.01, 50);
    for (size_t k = 1; k < w.b.size(); ++k) {
      CHECK(w.b[k] < w.b[k - 1]);
      CHECK(w.b[k] > 0.0);
    }
  }
}

TEST_CASE("caputo_l1 of a constant is zero") {
  const TimeSeries f = sampled(1.0, 32, +[](double) { return 3.7; });
  for (int n = 1; n <= 32; ++n) {
    CHECK(caputo_l1(f, FractionalOrder(0.3), n) == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("caputo_l1 of t at alpha = 1 is exactly the backward difference") {
  const TimeSeries f = sampled(1.0, 10, +[](double t) { return t; });
  for (int n = 1; n <= 10; ++n) {
    CHECK(caputo_l1(f, FractionalOrder(1.0), n) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("caputo_l1 of t approaches the power rule value") {
  const TimeSeries f = sampled(1.0, 100, +[](double t) { return t; });
  const double got = caputo_l1(f, FractionalOrder(0.5), 100);
  const double expect = 2.0 / std::sqrt(M_PI);  // Gamma(2)/Gamma(1.5)
  CHECK(got == doctest::Approx(expect).epsilon(2e-3));
}

TEST_CASE("caputo_l1 is linear in the series") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const TimeGrid grid(2.0, 24);
  std::vector<double> fv(25), gv(25), combo(25);
  for (int i = 0; i <= 24; ++i) {
    fv[i] = u(rng);
    gv[i] = u(rng);
  }
  const double a = 1.7, b = -0.4;
  for (int i = 0; i <= 24; ++i) combo[i] = a * fv[i] + b * gv[i];
  const TimeSeries f(grid, fv), g(grid, gv), h(grid, combo);
  const FractionalOrder order(0.6);
  for (int n : {1, 7, 24}) {
    const double lhs = caputo_l1(h, order, n);
    const double rhs = a * caputo_l1(f, order, n) + b * caputo_l1(g, order, n);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("eval_J basics") {
  CHECK(eval_J(2.0, 2.0, FractionalOrder(0.4), 0.7) == 0.0);
  CHECK(eval_J(0.0, 1.0, FractionalOrder(0.5), 1.0) ==
        doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(eval_J(0.0, 1.0, FractionalOrder(1.0), 1.0) == 0.0);
  CHECK_THROWS_AS(eval_J(0.0, 1.0, FractionalOrder(0.5), 0.0), std::invalid_argument);
}

TEST_CASE("eval_K of a constant vanishes") {
  const TimeSeries f = sampled(1.0, 64, +[](double) { return -2.5; });
  CHECK(eval_K(f, FractionalOrder(0.5), 0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(eval_K(f, FractionalOrder(0.5), 0.25, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("eval_K of the identity map has the closed form") {
  // K_(0,t)[s -> s](t) = alpha t^{1-alpha} / Gamma(2-alpha); exact for the
  // piecewise-linear reconstruction, so a coarse grid suffices.
  const TimeSeries f = sampled(1.0, 8, +[](double t) { return t; });
  const double expect = 0.5 / gamma_fn(1.5);
  CHECK(eval_K(f, FractionalOrder(0.5), 0.0, 1.0) ==
        doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("eval_K rejects bad windows and alpha = 1") {
  const TimeSeries f = sampled(1.0, 8, +[](double t) { return t; });
  CHECK_THROWS_AS(eval_K(f, FractionalOrder(1.0), 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(eval_K(f, FractionalOrder(0.5), 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(eval_K(f, FractionalOrder(0.5), -0.1, 0.5), std::invalid_argument);
}

TEST_CASE("splitting identity: J + K equals the quadrature oracle") {
  const SmoothFunction1D smooth{[](double t) { return std::sin(t) + 0.3 * t * t; },
                                [](double t) { return std::cos(t) + 0.6 * t; }};
  const TimeSeries f = TimeSeries::sample(TimeGrid(1.0, 20000), smooth.value);
  for (double alpha : {0.25, 0.5, 0.75}) {
    const FractionalOrder order(alpha);
    const double split = eval_J(f[0], f[20000], order, 1.0) +
                         eval_K(f, order, 0.0, 1.0);
    const double direct = caputo_quadrature(smooth, order, 1.0, 1e-10);
    CHECK(split == doctest::Approx(direct).epsilon(5e-6));
  }
}

TEST_CASE("marchaud form equals J + K exactly") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const TimeGrid grid(1.5, 40);
  std::vector<double> vals(41);
  for (double& v : vals) v = u(rng);
  const TimeSeries f(grid, vals);
  const FractionalOrder order(0.7);
  for (int n : {1, 13, 40}) {
    const double t = grid.node(n);
    const double split = eval_J(f[0], f[n], order, t) + eval_K(f, order, 0.0, t);
    CHECK(marchaud_eval(f, order, n) == split);
  }
}

TEST_CASE("marchaud of t^2 approaches the power rule") {
  const TimeSeries f = sampled(1.0, 4000, +[](double t) { return t * t; });
  const double got = marchaud_eval(f, FractionalOrder(0.5), 4000);
  const double expect = gamma_fn(3.0) / gamma_fn(2.5);  // about 1.5045
  CHECK(expect == doctest::Approx(1.5045056).epsilon(1e-6));
  CHECK(got == doctest::Approx(expect).epsilon(1e-4));
}

TEST_CASE("monotone-point sign: J and K are nonnegative at a running maximum") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const TimeGrid grid(1.0, 30);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> vals(31);
    for (double& v : vals) v = u(rng);
    // force node 30 to the running maximum
    double m = vals[0];
    for (double v : vals) m = std::max(m, v);
    vals[30] = m + 0.1;
    const TimeSeries f(grid, vals);
    const FractionalOrder order(0.45);
    CHECK(eval_J(f[0], f[30], order, 1.0) >= -1e-14);
    CHECK(eval_K(f, order, 0.0, 1.0) >= -1e-12);
  }
}

TEST_CASE("multi-term single term equals caputo_l1") {
  const TimeSeries f = sampled(1.0, 16, +[](double t) { return t * t - 0.2 * t; });
  const MultiTermOrder single = MultiTermOrder::single(FractionalOrder(0.4));
  for (int n : {1, 9, 16}) {
    CHECK(caputo_multi_term(f, single, n) == caputo_l1(f, FractionalOrder(0.4), n));
  }
}

TEST_CASE("multi-term combination matches the per-term power rule") {
  const TimeSeries f = sampled(1.0, 5000, +[](double t) { return t; });
  const MultiTermOrder combo({{1.0, FractionalOrder(0.3)}, {2.0, FractionalOrder(0.7)}});
  const double got = caputo_multi_term(f, combo, 5000);
  const double expect = 1.0 / gamma_fn(1.7) + 2.0 / gamma_fn(1.3);
  CHECK(got == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("multi-term of a constant vanishes") {
  const TimeSeries f = sampled(1.0, 12, +[](double) { return 4.0; });
  const MultiTermOrder combo({{1.0, FractionalOrder(0.3)}, {2.0, FractionalOrder(0.7)}});
  CHECK(caputo_multi_term(f, combo, 12) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("rl_integral closed forms") {
  const TimeSeries one = sampled(1.0, 16, +[](double) { return 1.0; });
  // I^{1-a} 1 (t) = t^{1-a} / Gamma(2-a)
  CHECK(rl_integral(one, FractionalOrder(0.5), 16) ==
        doctest::Approx(1.0 / gamma_fn(1.5)).epsilon(1e-13));
  const TimeSeries zero = sampled(1.0, 16, +[](double) { return 0.0; });
  CHECK(rl_integral(zero, FractionalOrder(0.5), 16) == 0.0);
  // alpha = 1 degenerates to the point value
  const TimeSeries lin = sampled(1.0, 16, +[](double t) { return 2.0 * t; });
  CHECK(rl_integral(lin, FractionalOrder(1.0), 8) == lin[8]);
}

TEST_CASE("rl relation: forward difference of I^{1-a}(u - u0) tracks caputo_l1") {
  // d/dt I^{1-a}[u - u(0)] = caputo derivative; check the discrete gap
  // shrinks under refinement.
  auto gap = [](int steps) {
    const TimeSeries u = TimeSeries::sample(TimeGrid(1.0, steps),
                                            [](double t) { return t * t + 0.5 * t; });
    std::vector<double> shifted(u.size());
    for (int i = 0; i < u.size(); ++i) shifted[i] = u[i] - u[0];
    const TimeSeries centered(u.grid(), shifted);
    const FractionalOrder order(0.5);
    double worst = 0.0;
    const double tau = u.grid().dt();
    for (int n = steps / 2; n < steps; ++n) {
      const double fd =
          (rl_integral(centered, order, n + 1) - rl_integral(centered, order, n)) / tau;
      const double cl1 = caputo_l1(u, order, n + 1);
      worst = std::max(worst, std::abs(fd - cl1));
    }
    return worst;
  };
  const double coarse = gap(50);
  const double mid = gap(100);
  const double fine = gap(200);
  CHECK(mid < coarse);
  CHECK(fine < mid);
}

TEST_CASE("caputo_l1 is exact on linear data") {
  // the piecewise-linear reconstruction reproduces f(t) = t, so the L1 value
  // carries no discretization error at all
  for (double alpha : {0.3, 0.7}) {
    const TimeSeries f = sampled(1.0, 100, +[](double t) { return t; });
    const double exact = power_rule_caputo(FractionalOrder(alpha), 1.0, 1.0);
    CHECK(std::abs(caputo_l1(f, FractionalOrder(alpha), 100) - exact) <= 1e-12);
  }
}

TEST_CASE("convergence order of caputo_l1 is 2 - alpha for t^2") {
  for (double alpha : {0.3, 0.7}) {
    std::vector<double> errors;
    for (int steps : {100, 200, 400}) {
      const TimeSeries f = TimeSeries::sample(TimeGrid(1.0, steps),
                                              [](double t) { return t * t; });
      const double exact = power_rule_caputo(FractionalOrder(alpha), 2.0, 1.0);
      errors.push_back(std::abs(caputo_l1(f, FractionalOrder(alpha), steps) - exact));
    }
    const double order1 = std::log2(errors[0] / errors[1]);
    const double order2 = std::log2(errors[1] / errors[2]);
    const double fitted = 0.5 * (order1 + order2);
    CHECK(std::abs(fitted - (2.0 - alpha)) <= 0.15);
  }
}
