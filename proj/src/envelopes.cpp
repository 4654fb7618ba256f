#include "fracpde/envelopes.hpp"

#include <limits>
#include <stdexcept>

namespace fracpde {

namespace {

inline double parab(double fj, double c, double dq) { return fj - c * (dq * dq); }

// Winner indices of max_j { f[stride*j] - c (q - j)^2 } for q = 0..n-1,
// by the lower-envelope-of-parabolas scan (upper envelope here since the
// parabolas open downward). Linear time. The hull's intersection abscissae
// round, so near an exact tie the raw assignment can trail the true maximum
// by an ulp; each query therefore also checks the adjacent hull parabolas
// and keeps the best, ties to the smaller index, which is exactly what the
// brute-force scan produces.
void hull_winners(const double* f, int n, int stride, double c, int* winners) {
  if (n == 1) {
    winners[0] = 0;
    return;
  }
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  const double inf = std::numeric_limits<double>::infinity();
  auto intersect = [&](int j1, int j2) {
    // abscissa where parabola j2 overtakes j1 (j1 < j2)
    return ((f[stride * j1] - f[stride * j2]) / c +
            (double(j2) * j2 - double(j1) * j1)) /
           (2.0 * (j2 - j1));
  };
  int k = 0;
  v[0] = 0;
  z[0] = -inf;
  z[1] = inf;
  for (int j = 1; j < n; ++j) {
    double s = intersect(v[k], j);
    while (s <= z[k]) {
      --k;
      s = intersect(v[k], j);
    }
    ++k;
    v[k] = j;
    z[k] = s;
    z[k + 1] = inf;
  }
  const int hull_size = k + 1;
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    int best = v[k];
    double best_val = parab(f[stride * best], c, double(q - best));
    for (int kk : {k - 1, k + 1}) {
      if (kk < 0 || kk >= hull_size) continue;
      const int j = v[kk];
      const double val = parab(f[stride * j], c, double(q - j));
      if (val > best_val || (val == best_val && j < best)) {
        best = j;
        best_val = val;
      }
    }
    winners[q] = best;
  }
}

void require_eps(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("envelope: eps must be positive");
}

}  // namespace

SpatialGridFunction sup_convolution(const SpatialGridFunction& f, double eps) {
  require_eps(eps);
  const GridLayout& g = f.grid;
  const double cx = g.hx * g.hx / eps;
  SpatialGridFunction out = f;

  if (g.dim == 1) {
    const int n = g.points_x();
    std::vector<int> win(n);
    hull_winners(f.values.data(), n, 1, cx, win.data());
    for (int q = 0; q < n; ++q) {
      out.values[q] = parab(f.values[win[q]], cx, double(q - win[q]));
    }
    return out;
  }

  const int px = g.points_x();
  const int py = g.points_y();
  const double cy = g.hy * g.hy / eps;
  std::vector<double> mid(f.values.size());
  std::vector<int> win(std::max(px, py));
  // axis pass along x within each row
  for (int r = 0; r < py; ++r) {
    const double* row = f.values.data() + r * px;
    hull_winners(row, px, 1, cx, win.data());
    for (int q = 0; q < px; ++q) {
      mid[r * px + q] = parab(row[win[q]], cx, double(q - win[q]));
    }
  }
  // axis pass along y within each column
  for (int q = 0; q < px; ++q) {
    hull_winners(mid.data() + q, py, px, cy, win.data());
    for (int r = 0; r < py; ++r) {
      out.values[r * px + q] = parab(mid[win[r] * px + q], cy, double(r - win[r]));
    }
  }
  return out;
}

SpatialGridFunction inf_convolution(const SpatialGridFunction& f, double eps) {
  require_eps(eps);
  SpatialGridFunction neg = f;
  for (double& v : neg.values) v = -v;
  SpatialGridFunction env = sup_convolution(neg, eps);
  for (double& v : env.values) v = -v;
  return env;
}

BruteEnvelope envelope_brute_with_arg(const SpatialGridFunction& f, double eps,
                                      EnvelopeKind kind) {
  require_eps(eps);
  if (kind == EnvelopeKind::inf) {
    SpatialGridFunction neg = f;
    for (double& v : neg.values) v = -v;
    BruteEnvelope dual = envelope_brute_with_arg(neg, eps, EnvelopeKind::sup);
    for (double& v : dual.values.values) v = -v;
    return dual;
  }

  const GridLayout& g = f.grid;
  const int px = g.points_x();
  const int py = g.points_y();
  const double cx = g.hx * g.hx / eps;
  const double cy = g.dim == 2 ? g.hy * g.hy / eps : 0.0;

  BruteEnvelope result;
  result.values = f;
  result.arg.assign(f.values.size(), 0);
  for (int r = 0; r < py; ++r) {
    for (int q = 0; q < px; ++q) {
      double best = -std::numeric_limits<double>::infinity();
      int best_idx = 0;
      for (int jr = 0; jr < py; ++jr) {
        for (int jq = 0; jq < px; ++jq) {
          const int j = jr * px + jq;
          double cand = parab(f.values[j], cx, double(q - jq));
          if (g.dim == 2) cand = cand - cy * (double(r - jr) * double(r - jr));
          if (cand > best) {
            best = cand;
            best_idx = j;
          }
        }
      }
      result.values.values[r * px + q] = best;
      result.arg[r * px + q] = best_idx;
    }
  }
  return result;
}

SpatialGridFunction envelope_brute(const SpatialGridFunction& f, double eps,
                                   EnvelopeKind kind) {
  return envelope_brute_with_arg(f, eps, kind).values;
}

}  // namespace fracpde
