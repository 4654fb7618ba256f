#pragma once

#include <functional>

#include "fracpde/fractional.hpp"
#include "fracpde/grid.hpp"

namespace fracpde {

/// A function together with its exact derivative on [0, T].
struct SmoothFunction1D {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
};

/// Caputo derivative of (t - a)^beta:
///   Gamma(beta+1) / Gamma(beta - alpha + 1) * (t - a)^{beta - alpha}.
double power_rule_caputo(FractionalOrder order, double beta, double t, double a = 0.0);

/// Direct evaluation of the defining integral
///   (1/Gamma(1-a)) Int_0^t f'(s) (t-s)^{-a} ds
/// by adaptive Simpson quadrature after the substitution
/// s = t - sigma^{1/(1-a)}, which removes the endpoint singularity.
/// Throws on non-convergence within the evaluation budget.
double caputo_quadrature(const SmoothFunction1D& f, FractionalOrder order, double t,
                         double tol);

/// One-parameter Mittag-Leffler function E_a(z). Power series with
/// compensated accumulation for |z| <= 30; four-term asymptotic tail
/// E_a(-x) ~ x^{-1}/Gamma(1-a) - x^{-2}/Gamma(1-2a) + ... for z < -30.
/// Series accuracy in doubles degrades for strongly negative z when a is
/// small; callers stay inside the eigen-decay range the solver needs.
double mittag_leffler(FractionalOrder order, double z);

enum class ModeBoundary { dirichlet, neumann };

/// Laplacian eigenmode on an interval or rectangle: -Lap(phi) = lambda phi,
/// phi satisfying its boundary condition exactly.
struct EigenMode {
  double lambda;
  std::function<double(Vec2)> phi;
  ModeBoundary boundary;
};

EigenMode interval_mode(double length, int k, ModeBoundary boundary);
EigenMode rectangle_mode(double lx, double ly, int kx, int ky, ModeBoundary boundary);

/// Exact solution E_a(-lambda t^a) phi(x) of d_t^a u - Lap(u) = 0 with
/// initial data phi.
double exact_eigen_solution(const EigenMode& mode, FractionalOrder order, double t,
                            Vec2 x);

/// Time barrier pinned at t = T: psi(t) = (a/(2 lam^alpha)) (t-T+lam)^alpha on
/// [T-lam, T], zero before.
double psi_lambda(double a_coef, double lam, FractionalOrder order, double horizon,
                  double t);

/// Closed form of the kernel window K_{(0,lam)}[psi](T):
///   (a / (2 lam^alpha)) * (Gamma(1+alpha) - 1/Gamma(1-alpha)).
double psi_lambda_kernel_value(double a_coef, double lam, FractionalOrder order);

}  // namespace fracpde
