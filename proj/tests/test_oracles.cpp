#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracpde/fractional.hpp"
#include "fracpde/gamma.hpp"
#include "fracpde/oracles.hpp"

using namespace fracpde;

TEST_CASE("power rule closed forms") {
  // Caputo of t at alpha = 1/2: Gamma(2)/Gamma(1.5) = 2/sqrt(pi)
  CHECK(power_rule_caputo(FractionalOrder(0.5), 1.0, 1.0) ==
        doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-13));
  // beta = alpha: constant in t
  const double a = power_rule_caputo(FractionalOrder(0.6), 0.6, 0.4);
  const double b = power_rule_caputo(FractionalOrder(0.6), 0.6, 2.9);
  CHECK(a == doctest::Approx(gamma_fn(1.6)).epsilon(1e-13));
  CHECK(a == doctest::Approx(b).epsilon(1e-13));
  // alpha = 1 is the classical derivative of t^2 at t = 3
  CHECK(power_rule_caputo(FractionalOrder(1.0), 2.0, 3.0) ==
        doctest::Approx(6.0).epsilon(1e-13));
  CHECK_THROWS_AS(power_rule_caputo(FractionalOrder(0.5), -1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("caputo quadrature on closed-form cases") {
  const SmoothFunction1D constant{[](double) { return 4.2; }, [](double) { return 0.0; }};
  CHECK(caputo_quadrature(constant, FractionalOrder(0.5), 1.0, 1e-10) ==
        doctest::Approx(0.0).epsilon(1e-10));

  const SmoothFunction1D t32{[](double t) { return std::pow(t, 1.5); },
                             [](double t) { return 1.5 * std::sqrt(t); }};
  const double got = caputo_quadrature(t32, FractionalOrder(0.5), 1.0, 1e-10);
  CHECK(got == doctest::Approx(gamma_fn(2.5) / gamma_fn(2.0)).epsilon(1e-8));
  CHECK(got == doctest::Approx(1.3293404).epsilon(1e-6));
}

TEST_CASE("caputo quadrature agrees with caputo_l1 on sin") {
  const SmoothFunction1D sine{[](double t) { return std::sin(t); },
                              [](double t) { return std::cos(t); }};
  const double direct = caputo_quadrature(sine, FractionalOrder(0.5), 1.0, 1e-8);
  const TimeSeries f = TimeSeries::sample(TimeGrid(1.0, 10000), sine.value);
  const double l1 = caputo_l1(f, FractionalOrder(0.5), 10000);
  CHECK(direct == doctest::Approx(l1).epsilon(1e-4));
}

TEST_CASE("power rule vs quadrature across the grid of cases") {
  for (double beta : {0.75, 1.0, 1.5, 2.0, 3.0}) {
    for (double alpha : {0.25, 0.5, 0.75}) {
      for (double t : {0.5, 1.0, 2.0}) {
        const SmoothFunction1D f{
            [beta](double s) { return std::pow(s, beta); },
            [beta](double s) { return s > 0.0 ? beta * std::pow(s, beta - 1.0) : 0.0; }};
        const double direct = caputo_quadrature(f, FractionalOrder(alpha), t, 1e-10);
        const double closed = power_rule_caputo(FractionalOrder(alpha), beta, t);
        CHECK(std::abs(direct - closed) <= 1e-8 * std::max(1.0, std::abs(closed)));
      }
    }
  }
}

TEST_CASE("mittag-leffler special values") {
  CHECK(mittag_leffler(FractionalOrder(0.37), 0.0) == 1.0);
  CHECK(mittag_leffler(FractionalOrder(1.0), 1.0) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-13));
  // E_{1/2}(-1) = e * erfc(1)
  const double expect = std::exp(1.0) * std::erfc(1.0);
  CHECK(mittag_leffler(FractionalOrder(0.5), -1.0) ==
        doctest::Approx(expect).epsilon(1e-10));
  CHECK(mittag_leffler(FractionalOrder(0.5), -1.0) ==
        doctest::Approx(0.4275836).epsilon(1e-6));
}

TEST_CASE("mittag-leffler at order one matches the exponential on [-5, 5]") {
  for (int i = 0; i <= 200; ++i) {
    const double z = -5.0 + 10.0 * i / 200.0;
    const double got = mittag_leffler(FractionalOrder(1.0), z);
    CHECK(std::abs(got - std::exp(z)) <= 1e-12 * std::max(1.0, std::exp(z)));
  }
}

TEST_CASE("mittag-leffler decays monotonically on the negative axis") {
  for (double alpha : {0.5, 0.75, 1.0}) {
    double prev = 1.0;
    for (int i = 1; i <= 60; ++i) {
      const double x = 6.0 * i / 60.0;
      const double val = mittag_leffler(FractionalOrder(alpha), -x);
      CHECK(val > 0.0);
      CHECK(val < prev);
      prev = val;
    }
    // far tail through the asymptotic branch (alpha = 1 decays below double
    // resolution out there, so only the fractional orders are sampled)
    if (alpha == 1.0) continue;
    double prev_tail = mittag_leffler(FractionalOrder(alpha), -31.0);
    CHECK(prev_tail > 0.0);
    for (double x : {35.0, 42.0, 55.0}) {
      const double val = mittag_leffler(FractionalOrder(alpha), -x);
      CHECK(val > 0.0);
      CHECK(val < prev_tail);
      prev_tail = val;
    }
  }
}

TEST_CASE("mittag-leffler spectral branch matches a high-precision series") {
  // long-double Kahan sum as the independent reference in the window where
  // the double series still has headroom but the spectral branch is active
  auto reference = [](double alpha, double x) {
    long double sum = 1.0L;
    for (int k = 1; k < 4000; ++k) {
      const long double lm =
          k * std::log((long double)x) - std::lgamma((long double)alpha * k + 1.0L);
      long double term = std::exp(lm);
      if (k % 2 == 1) term = -term;
      sum += term;
      if (std::abs((double)term) < 1e-24 && k > 8) break;
    }
    return (double)sum;
  };
  // cases sit inside (16, 24] in the cancellation exponent x^{1/a}: the
  // spectral branch is active and the long-double series still has ~9 digits
  const std::pair<double, double> cases[] = {
      {0.4, 3.3}, {0.5, 4.5}, {0.6, 6.0}, {0.75, 9.0}};
  for (const auto& [alpha, x] : cases) {
    REQUIRE(std::pow(x, 1.0 / alpha) > 16.0);
    REQUIRE(std::pow(x, 1.0 / alpha) <= 24.0);
    const double got = mittag_leffler(FractionalOrder(alpha), -x);
    const double ref = reference(alpha, x);
    CHECK(got == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("mittag-leffler rejects arguments beyond the series regime") {
  CHECK_THROWS_AS(mittag_leffler(FractionalOrder(0.5), 31.0), std::domain_error);
}

TEST_CASE("eigen modes satisfy the discrete eigenvalue equation") {
  const EigenMode mode = interval_mode(1.0, 1, ModeBoundary::dirichlet);
  const double h = 1e-4;
  for (double x : {0.3, 0.5, 0.62}) {
    const double lap = (mode.phi({x - h, 0}) - 2.0 * mode.phi({x, 0}) +
                        mode.phi({x + h, 0})) /
                       (h * h);
    CHECK(-lap == doctest::Approx(mode.lambda * mode.phi({x, 0})).epsilon(1e-6));
  }
  CHECK(mode.phi({0.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-15));

  const EigenMode nm = rectangle_mode(1.0, 2.0, 1, 2, ModeBoundary::neumann);
  CHECK(nm.lambda == doctest::Approx(M_PI * M_PI * (1.0 + 1.0)).epsilon(1e-13));
}

TEST_CASE("exact eigen solution endpoints") {
  const EigenMode mode = interval_mode(1.0, 1, ModeBoundary::dirichlet);
  const FractionalOrder half(0.5);
  // t = 0 returns the initial data
  CHECK(exact_eigen_solution(mode, half, 0.0, {0.25, 0}) ==
        doctest::Approx(mode.phi({0.25, 0})).epsilon(1e-14));
  // alpha = 1 is the classical heat mode
  const double t = 0.07;
  CHECK(exact_eigen_solution(mode, FractionalOrder(1.0), t, {0.5, 0}) ==
        doctest::Approx(std::exp(-mode.lambda * t)).epsilon(1e-11));
  // the alpha = 1/2 value at (0.1, 0.5), recomputed through the series
  const double val = exact_eigen_solution(mode, half, 0.1, {0.5, 0});
  const double decay = mittag_leffler(half, -mode.lambda * std::sqrt(0.1));
  CHECK(val == doctest::Approx(decay).epsilon(1e-14));
  CHECK(val == doctest::Approx(0.1729).epsilon(2e-3));
}

TEST_CASE("psi_lambda kernel value closed form") {
  const double got = psi_lambda_kernel_value(1.0, 1.0, FractionalOrder(0.5));
  const double expect = 0.5 * (gamma_fn(1.5) - 1.0 / gamma_fn(0.5));
  CHECK(got == doctest::Approx(expect).epsilon(1e-13));
  CHECK(got == doctest::Approx(0.1610187).epsilon(1e-5));
}

TEST_CASE("psi_lambda kernel bracket is positive across (0,1)") {
  for (int i = 1; i <= 99; ++i) {
    const double alpha = i / 100.0;
    CHECK(gamma_fn(1.0 + alpha) - 1.0 / gamma_fn(1.0 - alpha) > 0.0);
  }
}

TEST_CASE("psi_lambda kernel scaling in a and lambda") {
  const FractionalOrder order(0.4);
  const double base = psi_lambda_kernel_value(1.0, 1.0, order);
  CHECK(psi_lambda_kernel_value(3.0, 1.0, order) ==
        doctest::Approx(3.0 * base).epsilon(1e-13));
  CHECK(psi_lambda_kernel_value(1.0, 2.0, order) ==
        doctest::Approx(base * std::pow(2.0, -0.4)).epsilon(1e-13));
}

TEST_CASE("psi_lambda kernel matches eval_K on a fine sampling") {
  // K_{(0,lam)}[psi](T) on the time-shifted window: sample
  // g(r) = psi(T - lam + r) on [0, lam] and evaluate K_{(0,lam)}[g](lam).
  const double horizon = 2.0;
  for (double a : {1.0, 2.0}) {
    for (double lam : {0.25, 1.0}) {
      for (double alpha : {0.3, 0.5, 0.8}) {
        const FractionalOrder order(alpha);
        const TimeSeries g = TimeSeries::sample(
            TimeGrid(lam, 100000), [&](double r) {
              return psi_lambda(a, lam, order, horizon, horizon - lam + r);
            });
        const double quad = eval_K(g, order, 0.0, lam);
        const double closed = psi_lambda_kernel_value(a, lam, order);
        CHECK(quad == doctest::Approx(closed).epsilon(1e-5));
      }
    }
  }
}
