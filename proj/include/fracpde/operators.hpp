#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracpde/fractional.hpp"
#include "fracpde/grid.hpp"

namespace fracpde {

/// Catalog of degenerate elliptic nonlinearities F(t, x, w, p, X):
///   laplacian          -trace(X)
///   pucci(tm, tp)      maximal operator -tm*sum(lambda+) + tp*sum(lambda-)
///                      over eigenvalues of X, 0 < tm <= tp
///   eikonal(c)         |p| - c
///   bellman(terms)     max_i ( -sum_k a_ik X_kk - b_i . p + r_i w + q_i ),
///                      a_ik >= 0, r_i >= 0
///   reaction_shifted   base + gamma * w, gamma >= 0
/// All kinds are nonincreasing in X (degenerate ellipticity) and
/// nondecreasing in w.
class EllipticOperator {
 public:
  enum class Kind { laplacian, pucci, eikonal, bellman, reaction_shifted };

  struct LinearTerm {
    std::array<double, 2> diffusion{0.0, 0.0};  // per-axis, nonnegative
    std::array<double, 2> drift{0.0, 0.0};
    double reaction = 0.0;  // nonnegative
    double source = 0.0;
  };

  static EllipticOperator laplacian();
  static EllipticOperator pucci(double theta_minus, double theta_plus);
  static EllipticOperator eikonal(double speed);
  static EllipticOperator bellman(std::vector<LinearTerm> terms);
  static EllipticOperator reaction_shifted(EllipticOperator base, double gamma);

  Kind kind() const { return kind_; }
  std::string name() const;

  double operator()(double t, Vec2 x, double w, Vec2 p, const SymMat2& X) const;

  // Modulus metadata used by cfl_bound and the barrier constructions.
  double lip_hessian() const;    // bound on the X-sensitivity (per eigenvalue)
  double lip_gradient() const;   // bound on the p-sensitivity
  double lip_value() const;      // w-monotonicity coefficient
  double const_bound() const;    // sup |F(t,x,0,0,0)|
  double ellipticity_lower() const;  // uniform lower ellipticity (0 if none)

  double pucci_theta_minus() const { return theta_minus_; }
  double pucci_theta_plus() const { return theta_plus_; }
  double eikonal_speed() const { return speed_; }
  double reaction_gamma() const { return gamma_; }
  const std::vector<LinearTerm>& bellman_terms() const { return terms_; }
  const EllipticOperator& base() const;

 private:
  EllipticOperator() = default;

  Kind kind_ = Kind::laplacian;
  double theta_minus_ = 1.0, theta_plus_ = 1.0;
  double speed_ = 1.0;
  double gamma_ = 0.0;
  std::vector<LinearTerm> terms_;
  std::shared_ptr<const EllipticOperator> base_;
};

double eval_operator(const EllipticOperator& F, double t, Vec2 x, double w, Vec2 p,
                     const SymMat2& X);

/// Result of a randomized structure check.
struct StructureReport {
  struct Violation {
    int sample;
    double lhs, rhs;
  };
  int samples = 0;
  std::vector<Violation> violations;
  bool passed() const { return violations.empty(); }
};

using OperatorFn = std::function<double(double, Vec2, double, Vec2, const SymMat2&)>;

/// Draws random (t, x, w, p) and ordered pairs X <= Y (Y = X + P P^T) and
/// checks F(..., Y) <= F(..., X) + 1e-12.
StructureReport check_degenerate_ellipticity(const OperatorFn& F, int dim, int samples,
                                             std::uint64_t seed);
StructureReport check_degenerate_ellipticity(const EllipticOperator& F, int dim,
                                             int samples, std::uint64_t seed);

/// (A2): checks F(..., w1, ...) >= F(..., w2, ...) whenever w1 >= w2.
StructureReport check_value_monotonicity(const OperatorFn& F, int dim, int samples,
                                         std::uint64_t seed);
StructureReport check_value_monotonicity(const EllipticOperator& F, int dim,
                                         int samples, std::uint64_t seed);

struct StencilOptions {
  /// Override for the Lax-Friedrichs artificial viscosity (eikonal only).
  /// The default uses the Hamiltonian's gradient Lipschitz bound; setting
  /// it to zero produces the centered, non-monotone fixture.
  std::optional<double> lf_viscosity;
};

/// Monotone finite-difference residual S approximating F(t, x, w, grad u,
/// Hess u) from a node-centered patch. Neighbor layout: 1D {left, right};
/// 2D {left, right, down, up}. Nonincreasing in every neighbor value.
class MonotoneStencil {
 public:
  MonotoneStencil(const EllipticOperator& op, GridLayout grid, StencilOptions opts);

  int neighbor_count() const { return grid_.dim == 1 ? 2 : 4; }
  const GridLayout& grid() const { return grid_; }

  double residual(double t, Vec2 x, double w, double center,
                  std::span<const double> neighbors) const;

  /// Upper bound on d(residual)/d(center value).
  double diag_lipschitz() const;
  /// Consistency order on smooth data (2 for the laplacian, else 1).
  int consistency_order() const;

  const EllipticOperator& op() const { return op_; }

 private:
  EllipticOperator op_;
  GridLayout grid_;
  double lf_sigma_ = 0.0;
};

MonotoneStencil build_monotone_stencil(const EllipticOperator& op, GridLayout grid,
                                       StencilOptions opts = {});

/// Randomized directional check: raising any single neighbor value must not
/// raise the residual.
StructureReport check_monotonicity(const MonotoneStencil& stencil, int trials,
                                   std::uint64_t seed);

/// Largest explicit step restoring b_0 >= diag Lipschitz bound:
///   tau <= (Gamma(2 - alpha) / diag_lipschitz)^{1/alpha}.
struct CflBound {
  double tau_max;
  std::string derivation;
};
CflBound cfl_bound(const MonotoneStencil& stencil, FractionalOrder order);

}  // namespace fracpde
