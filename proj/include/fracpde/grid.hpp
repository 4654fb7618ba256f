#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace fracpde {

/// Point or gradient in at most two dimensions; 1D uses the x slot.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::sqrt(x * x + y * y); }
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Symmetric matrix in dimension 1 or 2.
struct SymMat2 {
  int dim = 1;
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double trace() const { return dim == 1 ? xx : xx + yy; }

  /// Eigenvalues, ascending. 1D: {xx, unused}.
  std::array<double, 2> eigenvalues() const {
    if (dim == 1) return {xx, 0.0};
    const double mean = 0.5 * (xx + yy);
    const double off = std::sqrt(0.25 * (xx - yy) * (xx - yy) + xy * xy);
    return {mean - off, mean + off};
  }
};

/// Uniform tensor grid over an interval [0, Lx] (dim 1) or a rectangle
/// [0, Lx] x [0, Ly] (dim 2); nx, ny count cells per axis, so there are
/// (nx+1)*(ny+1) nodes.
struct GridLayout {
  int dim = 1;
  int nx = 1;
  int ny = 0;  // 0 in one dimension
  double hx = 1.0;
  double hy = 0.0;

  static GridLayout interval(double length, int cells) {
    return GridLayout{1, cells, 0, length / cells, 0.0};
  }
  static GridLayout rectangle(double lx, double ly, int cx, int cy) {
    return GridLayout{2, cx, cy, lx / cx, ly / cy};
  }

  int points_x() const { return nx + 1; }
  int points_y() const { return dim == 2 ? ny + 1 : 1; }
  int node_count() const { return points_x() * points_y(); }
  int index(int ix, int iy = 0) const { return iy * points_x() + ix; }
  int ix_of(int idx) const { return idx % points_x(); }
  int iy_of(int idx) const { return idx / points_x(); }

  Vec2 coords(int idx) const {
    return {ix_of(idx) * hx, dim == 2 ? iy_of(idx) * hy : 0.0};
  }
  bool is_boundary(int idx) const {
    const int ix = ix_of(idx);
    if (ix == 0 || ix == nx) return true;
    if (dim == 2) {
      const int iy = iy_of(idx);
      if (iy == 0 || iy == ny) return true;
    }
    return false;
  }
};

/// Finite real values on a GridLayout's nodes.
struct SpatialGridFunction {
  GridLayout grid;
  std::vector<double> values;

  SpatialGridFunction() = default;
  SpatialGridFunction(GridLayout g, std::vector<double> v);
  static SpatialGridFunction constant(GridLayout g, double c);

  double& operator[](int idx) { return values[idx]; }
  double operator[](int idx) const { return values[idx]; }
  int size() const { return static_cast<int>(values.size()); }
};

}  // namespace fracpde
