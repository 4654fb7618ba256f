#pragma once

#include <string>
#include <vector>

#include "fracpde/fractional.hpp"
#include "fracpde/geometry.hpp"
#include "fracpde/operators.hpp"

namespace fracpde {

enum class BoundaryKind { dirichlet_strong, neumann_viscosity };
enum class Stepping { explicit_march, implicit_fixed_point };

/// Full description of an initial-boundary value problem instance.
struct ProblemSpec {
  DomainGeometry geometry;
  double horizon = 1.0;
  int time_steps = 1;
  MultiTermOrder order = MultiTermOrder::single(FractionalOrder(1.0));
  EllipticOperator op = EllipticOperator::laplacian();
  std::vector<double> initial;
  BoundaryKind boundary = BoundaryKind::dirichlet_strong;
  Stepping stepping = Stepping::implicit_fixed_point;

  TimeGrid time_grid() const { return TimeGrid(horizon, time_steps); }
  /// Checks finiteness and the homogeneous-Dirichlet compatibility of the
  /// initial data; throws std::invalid_argument on violation.
  void validate() const;
};

/// Real values on the full space-time grid, time-major.
struct SpaceTimeFunction {
  int nt = 0;     // time steps; nt+1 slices
  int nodes = 0;  // spatial nodes per slice
  std::vector<double> v;

  SpaceTimeFunction() = default;
  SpaceTimeFunction(int nt_, int nodes_)
      : nt(nt_), nodes(nodes_), v(std::size_t(nt_ + 1) * nodes_, 0.0) {}

  double& at(int n, int i) { return v[std::size_t(n) * nodes + i]; }
  double at(int n, int i) const { return v[std::size_t(n) * nodes + i]; }
  const double* slice(int n) const { return v.data() + std::size_t(n) * nodes; }
  double* slice(int n) { return v.data() + std::size_t(n) * nodes; }
};

/// Discrete realization of the viscosity-sense boundary operator pair at a
/// Neumann boundary node: envelopes of the interior scheme residual and the
/// one-sided normal difference.
struct BoundaryOperator {
  double lower;  // E_* = min(pde residual, normal residual)
  double upper;  // E^* = max(pde residual, normal residual)
};
inline BoundaryOperator boundary_operator_residual(double pde_res, double normal_res) {
  return {std::min(pde_res, normal_res), std::max(pde_res, normal_res)};
}

struct Solution {
  SpaceTimeFunction values;
  GridLayout grid;
  double horizon = 0.0;
  std::vector<double> step_residual;    // sup-norm scheme residual per step
  std::vector<int> step_iterations;     // inner sweeps per step
  std::vector<double> neumann_lower;    // per step: min over boundary of E_*
  std::vector<double> neumann_upper;    // per step: max over boundary of E^*
  std::vector<double> neumann_normal;   // per step: sup |normal difference|
  double wall_seconds = 0.0;
  std::string scheme_note;

  TimeGrid time_grid() const { return TimeGrid(horizon, values.nt); }
};

/// Marches the L1/monotone-stencil scheme over the space-time grid. The
/// implicit path solves each step to a residual below 1e-10 (direct
/// tridiagonal elimination for linear one-dimensional operators, nonlinear
/// Gauss-Seidel otherwise); the explicit path requires the combined zeroth
/// weight to dominate the stencil's diagonal Lipschitz bound and throws
/// NumericalError otherwise.
Solution solve(const ProblemSpec& spec);

struct BarrierSampling {
  int time_anchors = 10;    // boundary-anchored s values per boundary node
  int space_stride = 3;     // sub-lattice stride for initial anchors
  int epsilon_levels = 7;   // geometric ladder eps0 * 2^{-j}
  double epsilon0 = 1.0;    // scaled by max(1, max|u0|)
};

struct BarrierPair {
  SpaceTimeFunction lower;
  SpaceTimeFunction upper;
  std::string log;  // constants chosen, for the record
};

/// Pointwise supremum (infimum) of the explicit Dirichlet sub(super)solution
/// family: boundary-anchored members built from the polynomial time profile
/// and the exterior-sphere power barrier, initial-anchored members from the
/// t^alpha/Gamma(1+alpha) + quadratic profile. Requires a single-order spec
/// and a uniformly elliptic catalog operator.
BarrierPair build_barriers_dirichlet(const ProblemSpec& spec,
                                     const BarrierSampling& sampling = {});

/// -M - C t^am/Gamma(1+am) + d(x) and its negation, with d the boundary
/// distance near the boundary, capped smoothly in the interior; am is the
/// largest order of the (possibly multi-term) derivative.
BarrierPair build_barriers_neumann(const ProblemSpec& spec);

struct PerronTrace {
  int sweeps = 0;
  double final_update = 0.0;
  double min_update = 0.0;  // nonnegative: the bump only raises values
  std::vector<double> sweep_max_update;
};

/// Discrete Perron iteration: starting from the lower barrier, each sweep
/// raises every node to the root of its own discrete equation (the bump),
/// never lowering values, until the largest update falls below 1e-11.
Solution perron_iterate(const ProblemSpec& spec, const SpaceTimeFunction& lower,
                        const SpaceTimeFunction& upper, PerronTrace* trace = nullptr);

}  // namespace fracpde
