#pragma once

#include <optional>
#include <vector>

#include "fracpde/solver.hpp"

namespace fracpde {

enum class SolutionSide { sub, super };

/// Space-time quadratic c + a(t-t0) + p.(x-x0) + (x-x0)'X(x-x0)/2. The
/// vertical shift c never enters the residual, so it is left at zero.
struct QuadraticTestFunction {
  double time_slope = 0.0;
  Vec2 gradient{};
  SymMat2 hessian{};
  double t0 = 0.0;
  Vec2 x0{};

  double value(double t, Vec2 x) const;
};

struct TestFunctionFamily {
  std::vector<QuadraticTestFunction> members;

  /// Slopes/curvatures scaled to the solution's oscillation and the grid
  /// extents, anchored on a sub-lattice; always contains the zero quadratic.
  static TestFunctionFamily default_family(const ProblemSpec& spec,
                                           double value_scale, int anchors_t = 4,
                                           int anchors_x = 4);
};

/// One touching-point check per applicable family member: the member is
/// shifted so u - phi peaks (sub) or dips (super) on the grid; members whose
/// extremum lands at t = 0 or on the spatial boundary test nothing and are
/// counted as skipped.
struct ViscosityReport {
  struct Entry {
    int member;
    int time_index;
    int node_index;
    double residual;
    bool pass;
  };
  std::vector<Entry> entries;
  int checked = 0;
  int skipped = 0;
  double worst_violation = 0.0;  // beyond-tolerance amount, 0 when clean

  bool passed() const { return worst_violation == 0.0; }
};

ViscosityReport check_viscosity_residuals(const Solution& u, const ProblemSpec& spec,
                                          const TestFunctionFamily& family,
                                          SolutionSide side, double tol);

/// Same check against an arbitrary space-time table (used for barriers).
ViscosityReport check_viscosity_residuals(const SpaceTimeFunction& u,
                                          const ProblemSpec& spec,
                                          const TestFunctionFamily& family,
                                          SolutionSide side, double tol);

/// Scheme-aware residual tolerance C (tau^{2-a} + h^q): a is the largest
/// order in the derivative, q the stencil's consistency order.
double scheme_tolerance(const ProblemSpec& spec, double calibration_constant);

struct ComparisonResult {
  bool boundary_ordered = false;   // hypothesis: u <= v + tol on the parabolic boundary
  bool everywhere_ordered = false; // conclusion: u <= v + tol on the whole grid
  struct Witness {
    int time_index;
    int node_index;
    double gap;            // (u - v) at the witness
    double j_of_difference;  // J[u - v] at the global max of u - v
  };
  std::optional<Witness> witness;

  bool holds() const { return !boundary_ordered || everywhere_ordered; }
};

/// Discrete comparison principle: ordered parabolic-boundary data must force
/// ordering everywhere. The witness carries the first violating node and
/// J[u-v] at the global maximum of the difference (the sign mechanism that
/// explains the failure).
ComparisonResult check_comparison(const Solution& u, const Solution& v, double tol);

struct AlphaStudyRow {
  double alpha;
  double sup_distance;
};

/// Solves the spec at each order in `alphas` on the fixed grid and reports
/// the sup-norm distance to the supplied classical (alpha = 1) run.
std::vector<AlphaStudyRow> alpha_limit_study(const ProblemSpec& base,
                                             const std::vector<double>& alphas,
                                             const Solution& classical_reference);

}  // namespace fracpde
