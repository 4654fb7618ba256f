#pragma once

#include <vector>

#include "fracpde/grid.hpp"

namespace fracpde {

enum class EnvelopeKind { sup, inf };

/// Sup-convolution u^eps(x) = max_{x'} ( f(x') - |x - x'|^2 / eps ) over the
/// grid nodes, computed exactly by the separable lower-envelope-of-parabolas
/// pass (one axis at a time, linear time per pass). The winning node is
/// located by the envelope; its value is then evaluated with the same
/// arithmetic the brute-force scan uses, so the two agree bit for bit.
SpatialGridFunction sup_convolution(const SpatialGridFunction& f, double eps);

/// Inf-convolution via the duality f_eps = -(-f)^eps, applied literally.
SpatialGridFunction inf_convolution(const SpatialGridFunction& f, double eps);

/// O(n^2) reference scan; ties go to the smallest flat node index.
SpatialGridFunction envelope_brute(const SpatialGridFunction& f, double eps,
                                   EnvelopeKind kind);

/// Reference scan that also reports where each maximum is attained.
struct BruteEnvelope {
  SpatialGridFunction values;
  std::vector<int> arg;  // flat index of the attaining node, per output node
};
BruteEnvelope envelope_brute_with_arg(const SpatialGridFunction& f, double eps,
                                      EnvelopeKind kind);

}  // namespace fracpde
