#pragma once

#include <vector>

#include "fracpde/grid.hpp"

namespace fracpde {

/// Interval [0, L] or rectangle [0, Lx] x [0, Ly] on a uniform node grid,
/// with outward unit normals and the exact distance-to-boundary field.
class DomainGeometry {
 public:
  static DomainGeometry interval(double length, int cells);
  static DomainGeometry rectangle(double lx, double ly, int cx, int cy);

  const GridLayout& layout() const { return layout_; }
  int dim() const { return layout_.dim; }
  double length_x() const { return length_x_; }
  double length_y() const { return length_y_; }
  int node_count() const { return layout_.node_count(); }
  bool is_boundary(int idx) const { return layout_.is_boundary(idx); }
  Vec2 coords(int idx) const { return layout_.coords(idx); }

  /// Outward unit normal at a boundary node; diagonal at corners.
  Vec2 outward_normal(int idx) const;

  /// Exact distance to the boundary; zero exactly at boundary nodes.
  double boundary_distance(int idx) const;

  double diameter() const;
  double inradius() const;
  /// Radius of the exterior tangent spheres (the domain is convex, so any
  /// radius works; the inradius keeps the sphere centers close).
  double exterior_sphere_radius() const { return inradius(); }

  std::vector<int> boundary_nodes() const;

 private:
  DomainGeometry(GridLayout layout, double lx, double ly)
      : layout_(layout), length_x_(lx), length_y_(ly) {}

  GridLayout layout_;
  double length_x_;
  double length_y_;
};

}  // namespace fracpde
