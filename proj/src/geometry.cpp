#include "fracpde/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracpde {

DomainGeometry DomainGeometry::interval(double length, int cells) {
  if (!(length > 0.0) || cells < 2) {
    throw std::invalid_argument("DomainGeometry::interval: need length > 0, cells >= 2");
  }
  return DomainGeometry(GridLayout::interval(length, cells), length, 0.0);
}

DomainGeometry DomainGeometry::rectangle(double lx, double ly, int cx, int cy) {
  if (!(lx > 0.0) || !(ly > 0.0) || cx < 2 || cy < 2) {
    throw std::invalid_argument("DomainGeometry::rectangle: need positive sides, cells >= 2");
  }
  return DomainGeometry(GridLayout::rectangle(lx, ly, cx, cy), lx, ly);
}

Vec2 DomainGeometry::outward_normal(int idx) const {
  if (!is_boundary(idx)) {
    throw std::invalid_argument("outward_normal: node is not on the boundary");
  }
  const int ix = layout_.ix_of(idx);
  double nx = ix == 0 ? -1.0 : (ix == layout_.nx ? 1.0 : 0.0);
  double ny = 0.0;
  if (dim() == 2) {
    const int iy = layout_.iy_of(idx);
    ny = iy == 0 ? -1.0 : (iy == layout_.ny ? 1.0 : 0.0);
  }
  const double norm = std::sqrt(nx * nx + ny * ny);
  return {nx / norm, ny / norm};
}

double DomainGeometry::boundary_distance(int idx) const {
  const Vec2 p = coords(idx);
  double d = std::min(p.x, length_x_ - p.x);
  if (dim() == 2) {
    d = std::min({d, p.y, length_y_ - p.y});
  }
  return std::max(d, 0.0);
}

double DomainGeometry::diameter() const {
  if (dim() == 1) return length_x_;
  return std::hypot(length_x_, length_y_);
}

double DomainGeometry::inradius() const {
  if (dim() == 1) return 0.5 * length_x_;
  return 0.5 * std::min(length_x_, length_y_);
}

std::vector<int> DomainGeometry::boundary_nodes() const {
  std::vector<int> out;
  for (int i = 0; i < node_count(); ++i) {
    if (is_boundary(i)) out.push_back(i);
  }
  return out;
}

}  // namespace fracpde
