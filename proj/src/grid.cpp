#include "fracpde/grid.hpp"

#include <stdexcept>

namespace fracpde {

SpatialGridFunction::SpatialGridFunction(GridLayout g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid.node_count()) {
    throw std::invalid_argument("SpatialGridFunction: value count does not match grid");
  }
  for (double x : values) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("SpatialGridFunction: values must be finite");
    }
  }
}

SpatialGridFunction SpatialGridFunction::constant(GridLayout g, double c) {
  return SpatialGridFunction(g, std::vector<double>(g.node_count(), c));
}

}  // namespace fracpde
