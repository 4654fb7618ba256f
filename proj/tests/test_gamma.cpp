#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracpde/gamma.hpp"

using fracpde::gamma_fn;
using fracpde::recip_gamma;

TEST_CASE("gamma at integer and half-integer points") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
  CHECK(gamma_fn(1.5) == doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-14));
}

TEST_CASE("gamma matches the C library across [0.05, 50]") {
  for (int i = 0; i <= 2000; ++i) {
    const double x = 0.05 + (50.0 - 0.05) * i / 2000.0;
    const double ours = gamma_fn(x);
    const double ref = std::tgamma(x);
    CHECK(std::abs(ours - ref) <= 1e-12 * std::abs(ref));
  }
}

TEST_CASE("gamma reflection handles negative non-integers") {
  // Gamma(-0.5) = -2 sqrt(pi)
  CHECK(gamma_fn(-0.5) == doctest::Approx(-2.0 * std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(gamma_fn(-1.5) == doctest::Approx(4.0 / 3.0 * std::sqrt(M_PI)).epsilon(1e-13));
}

TEST_CASE("gamma poles raise") {
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-3.0), std::domain_error);
}

TEST_CASE("reciprocal gamma vanishes at the poles") {
  CHECK(recip_gamma(0.0) == 0.0);
  CHECK(recip_gamma(-1.0) == 0.0);
  CHECK(recip_gamma(-7.0) == 0.0);
  CHECK(recip_gamma(2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(recip_gamma(0.5) == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-13));
}
