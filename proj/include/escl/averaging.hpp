#pragma once

#include <Eigen/Dense>

#include "escl/scalar_map.hpp"

namespace escl {

/// Uniform periodic trapezoidal rule over [0, 2pi]. Spectrally accurate
/// on smooth periodic integrands and exact on trigonometric polynomials,
/// which makes the quadratic-map identities machine-exact.
class QuadratureSpec {
 public:
  explicit QuadratureSpec(int n_nodes = 512);

  int n_nodes() const { return int(sin_tau_.size()); }
  const Eigen::ArrayXd& sin_tau() const { return sin_tau_; }
  /// sin^2(tau) - 1/2 at the nodes
  const Eigen::ArrayXd& sin2_centered() const { return sin2_centered_; }

 private:
  Eigen::ArrayXd sin_tau_;
  Eigen::ArrayXd sin2_centered_;
};

/// Averaged gradient estimate
///   G(theta) = (1/(a pi)) \int_0^{2pi} sin(tau) J(theta + a sin tau) dtau
double avg_gradient(const ScalarMap& map, double theta_bar, double a,
                    const QuadratureSpec& quad);

/// Averaged Hessian estimate
///   H(theta) = (8/(a^2 pi)) \int_0^{2pi} (sin^2 tau - 1/2) J(theta + a sin tau) dtau
double avg_hessian(const ScalarMap& map, double theta_bar, double a,
                   const QuadratureSpec& quad);

/// d/dtheta of avg_gradient, by differentiation under the integral sign
/// (J replaced with J' in the same quadrature).
double avg_gradient_deriv(const ScalarMap& map, double theta_bar, double a,
                          const QuadratureSpec& quad);

/// d/dtheta of avg_hessian, same construction.
double avg_hessian_deriv(const ScalarMap& map, double theta_bar, double a,
                         const QuadratureSpec& quad);

/// Sandwich bounds (J'(theta-|a|), J'(theta+|a|)); for strictly convex
/// maps the averaged gradient lies strictly between them.
std::pair<double, double> gradient_bounds(const ScalarMap& map,
                                          double theta_bar, double a);

/// Closed-form strictly positive lower bound on the averaged Hessian:
///   3(2sqrt2-1)/(4 pi a^2) * (J(t+c)/2 + J(t-c)/2 - J(t))
///   + 3sqrt2/(4 pi a) * (J'(t+c) - J'(t-c)),   c = a/sqrt2,
/// with the second-derivative integral evaluated exactly via J'.
double hessian_lower_bound(const ScalarMap& map, double theta_bar, double a);

struct EquilibriumResult {
  double theta_bar_star = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  double residual = 0.0;   // |G(theta_bar_star)|
  double gamma_star = 0.0; // 1 / H(theta_bar_star)
};

/// Locates the unique zero of the averaged gradient inside
/// (theta*-|a|, theta*+|a|) by bisection, valid because the averaged
/// gradient is strictly increasing on strictly convex maps.
/// Tolerance semantics: terminal bracket width < tol.
EquilibriumResult find_equilibrium(const ScalarMap& map, double a, double tol,
                                   const QuadratureSpec& quad);

}  // namespace escl
