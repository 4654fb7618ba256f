#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fracpde/envelopes.hpp"

using namespace fracpde;

namespace {

SpatialGridFunction random_function(const GridLayout& g, std::mt19937_64& rng,
                                    double amplitude = 1.0) {
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  std::vector<double> v(g.node_count());
  for (double& x : v) x = u(rng);
  return SpatialGridFunction(g, std::move(v));
}

}  // namespace

TEST_CASE("constant functions are fixed points") {
  const GridLayout g = GridLayout::interval(1.0, 40);
  const SpatialGridFunction f = SpatialGridFunction::constant(g, 2.5);
  const SpatialGridFunction up = sup_convolution(f, 0.3);
  const SpatialGridFunction down = inf_convolution(f, 0.3);
  for (int i = 0; i < f.size(); ++i) {
    CHECK(up[i] == 2.5);
    CHECK(down[i] == 2.5);
  }
}

TEST_CASE("sup convolution of |x| at the kink is about eps/4") {
  // max_x' (|x'| - (x-x')^2/eps) at x = 0 is attained near x' = eps/2
  const int cells = 2000;
  const GridLayout g = GridLayout::interval(2.0, cells);  // x - 1 in [-1, 1]
  std::vector<double> v(g.node_count());
  for (int i = 0; i <= cells; ++i) v[i] = std::abs(i * g.hx - 1.0);
  const SpatialGridFunction f(g, std::move(v));
  const double eps = 0.2;
  const SpatialGridFunction env = sup_convolution(f, eps);
  const int center = cells / 2;  // x = 0
  CHECK(env[center] == doctest::Approx(eps / 4.0).epsilon(1e-2));
  const SpatialGridFunction brute = envelope_brute(f, eps, EnvelopeKind::sup);
  CHECK(env[center] == brute[center]);
}

TEST_CASE("fast envelope equals brute force exactly on random functions (1D)") {
  std::mt19937_64 rng(17);
  const GridLayout g = GridLayout::interval(1.0, 120);
  for (int rep = 0; rep < 50; ++rep) {
    const SpatialGridFunction f = random_function(g, rng);
    for (double eps : {0.01, 0.1, 1.0}) {
      const SpatialGridFunction fast = sup_convolution(f, eps);
      const SpatialGridFunction brute = envelope_brute(f, eps, EnvelopeKind::sup);
      for (int i = 0; i < f.size(); ++i) CHECK(fast[i] == brute[i]);
    }
  }
}

TEST_CASE("fast envelope equals brute force exactly on random functions (2D)") {
  std::mt19937_64 rng(29);
  const GridLayout g = GridLayout::rectangle(1.0, 0.5, 24, 16);
  for (int rep = 0; rep < 25; ++rep) {
    const SpatialGridFunction f = random_function(g, rng);
    const SpatialGridFunction fast = sup_convolution(f, 0.07);
    const SpatialGridFunction brute = envelope_brute(f, 0.07, EnvelopeKind::sup);
    for (int i = 0; i < f.size(); ++i) CHECK(fast[i] == brute[i]);
  }
}

TEST_CASE("duality holds bit for bit") {
  std::mt19937_64 rng(5);
  const GridLayout g = GridLayout::interval(1.0, 64);
  const SpatialGridFunction f = random_function(g, rng);
  const SpatialGridFunction dual = inf_convolution(f, 0.2);
  SpatialGridFunction neg = f;
  for (double& v : neg.values) v = -v;
  const SpatialGridFunction sup_of_neg = sup_convolution(neg, 0.2);
  for (int i = 0; i < f.size(); ++i) CHECK(dual[i] == -sup_of_neg[i]);
}

TEST_CASE("ordering, semiconvexity, and eps-monotonicity") {
  std::mt19937_64 rng(41);
  const GridLayout g = GridLayout::interval(1.0, 100);
  for (int rep = 0; rep < 20; ++rep) {
    const SpatialGridFunction f = random_function(g, rng);
    double sup_abs = 0.0;
    for (double v : f.values) sup_abs = std::max(sup_abs, std::abs(v));
    const double eps1 = 0.05, eps2 = 0.25;
    const SpatialGridFunction e1 = sup_convolution(f, eps1);
    const SpatialGridFunction e2 = sup_convolution(f, eps2);
    for (int i = 0; i < f.size(); ++i) {
      CHECK(f[i] <= e1[i]);
      CHECK(e1[i] <= sup_abs + 1e-15);
      CHECK(e1[i] <= e2[i]);  // monotone in eps
    }
    for (int i = 1; i + 1 < f.size(); ++i) {
      const double second = (e1[i + 1] - 2.0 * e1[i] + e1[i - 1]) / (g.hx * g.hx);
      CHECK(second >= -2.0 / eps1 - 1e-9);
    }
  }
}

TEST_CASE("semiconvexity along both axes in 2D") {
  std::mt19937_64 rng(43);
  const GridLayout g = GridLayout::rectangle(1.0, 1.0, 20, 20);
  const SpatialGridFunction f = random_function(g, rng);
  const double eps = 0.1;
  const SpatialGridFunction env = sup_convolution(f, eps);
  const int px = g.points_x();
  for (int iy = 0; iy < g.points_y(); ++iy) {
    for (int ix = 1; ix + 1 < px; ++ix) {
      const int i = g.index(ix, iy);
      const double sxx = (env[i + 1] - 2.0 * env[i] + env[i - 1]) / (g.hx * g.hx);
      CHECK(sxx >= -2.0 / eps - 1e-9);
    }
  }
  for (int iy = 1; iy + 1 < g.points_y(); ++iy) {
    for (int ix = 0; ix < px; ++ix) {
      const int i = g.index(ix, iy);
      const double syy = (env[i + px] - 2.0 * env[i] + env[i - px]) / (g.hy * g.hy);
      CHECK(syy >= -2.0 / eps - 1e-9);
    }
  }
}

TEST_CASE("attainment radius for interior nodes") {
  std::mt19937_64 rng(57);
  const GridLayout g = GridLayout::interval(1.0, 200);
  const SpatialGridFunction f = random_function(g, rng, 0.25);
  double sup_abs = 0.0;
  for (double v : f.values) sup_abs = std::max(sup_abs, std::abs(v));
  const double eps = 0.02;
  const double radius = std::sqrt(2.0 * sup_abs) * std::sqrt(eps);
  const BruteEnvelope env = envelope_brute_with_arg(f, eps, EnvelopeKind::sup);
  for (int i = 0; i < f.size(); ++i) {
    const double x = i * g.hx;
    const double dist = std::min(x, 1.0 - x);
    if (dist <= radius) continue;  // only nodes deep inside the domain
    const double dx = std::abs(env.arg[i] - i) * g.hx;
    CHECK(dx <= radius + g.hx + 1e-12);
  }
}

TEST_CASE("single spike becomes a parabola cap") {
  const GridLayout g = GridLayout::interval(1.0, 50);
  std::vector<double> v(g.node_count(), 0.0);
  v[25] = 1.0;
  const SpatialGridFunction f(g, std::move(v));
  const double eps = 0.5;
  const SpatialGridFunction env = envelope_brute(f, eps, EnvelopeKind::sup);
  for (int i = 0; i < f.size(); ++i) {
    const double d = (i - 25) * g.hx;
    // the spike's parabola 1 - d^2/eps against the flat background's 0
    const double expect = std::max(1.0 - d * d / eps, 0.0);
    CHECK(env[i] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("moreau shrinkage of x^2") {
  const GridLayout g = GridLayout::interval(2.0, 400);  // centered at 1
  std::vector<double> v(g.node_count());
  for (int i = 0; i < g.node_count(); ++i) {
    const double x = i * g.hx - 1.0;
    v[i] = x * x;
  }
  const SpatialGridFunction f(g, std::move(v));
  const SpatialGridFunction down = inf_convolution(f, 2.0);
  CHECK(down[200] == doctest::Approx(0.0).epsilon(1e-12));
  const SpatialGridFunction brute = envelope_brute(f, 2.0, EnvelopeKind::inf);
  for (int i = 0; i < f.size(); ++i) CHECK(down[i] == brute[i]);
}

TEST_CASE("brute argmax resolves exact ties to the smallest flat index") {
  // two equal spikes: the midpoint query ties exactly; the first spike wins
  const GridLayout g = GridLayout::interval(1.0, 10);
  std::vector<double> v(g.node_count(), 0.0);
  v[3] = 1.0;
  v[7] = 1.0;
  const SpatialGridFunction f(g, std::move(v));
  const BruteEnvelope env = envelope_brute_with_arg(f, 10.0, EnvelopeKind::sup);
  CHECK(env.arg[5] == 3);
}
