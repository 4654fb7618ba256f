#include "fracpde/gamma.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracpde {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Lanczos coefficients for g = 7, n = 9 (Godfrey's set).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::floor(x);
}

// Valid for x >= 0.5 only.
double lanczos_core(double x) {
  const double z = x - 1.0;
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) {
    acc += kLanczos[i] / (z + i);
  }
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

}  // namespace

double gamma_fn(double x) {
  if (is_nonpositive_integer(x)) {
    throw std::domain_error("gamma_fn: pole at x = " + std::to_string(x));
  }
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
    return kPi / (std::sin(kPi * x) * lanczos_core(1.0 - x));
  }
  return lanczos_core(x);
}

double recip_gamma(double x) {
  if (is_nonpositive_integer(x)) {
    return 0.0;
  }
  if (x < 0.5) {
    return std::sin(kPi * x) * lanczos_core(1.0 - x) / kPi;
  }
  return 1.0 / lanczos_core(x);
}

}  // namespace fracpde
