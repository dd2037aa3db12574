#pragma once

#include <Eigen/Dense>

#include "escl/averaging.hpp"
#include "escl/dither.hpp"
#include "escl/scalar_map.hpp"

namespace escl {

/// Gains shared by all ESC variants.
struct EscParams {
  DitherSpec dither;
  double k;        // gradient gain, > 0
  double omega_l;  // Riccati filter gain, > 0

  EscParams(DitherSpec d, double k_, double omega_l_)
      : dither(d), k(k_), omega_l(omega_l_) {
    if (!(k > 0.0)) throw std::invalid_argument("EscParams: k must be positive");
    if (!(omega_l > 0.0))
      throw std::invalid_argument("EscParams: omega_l must be positive");
  }
};

using State2 = Eigen::Vector2d;

/// NESC state (theta_hat, Gamma_hat); lives on the half-plane Gamma_hat > 0.
struct NescState {
  double theta_hat;
  double gamma_hat;
};

/// Log error coordinates (theta_err, gamma_err) = (theta_hat - theta_bar_star,
/// ln(Gamma_hat * H(theta_hat))).
struct ErrorStateLog {
  double theta_err;
  double gamma_err;
};

/// Affine error coordinates (theta_err, Gamma_err) with
/// Gamma_err = Gamma_hat - Gamma_star.
struct ErrorStateGamma {
  double theta_err;
  double Gamma_err;
};

/// Everything an error-coordinate right-hand side needs besides the state:
/// the equilibrium it is measured from and the quadrature used for the
/// averaged estimates. All averaged quantities are evaluated at absolute
/// coordinates theta_err + theta_bar_star.
struct ErrorFrame {
  double theta_bar_star;
  const QuadratureSpec* quad;
};

// --- gradient ESC ---

/// Model-based GESC: -k J'(theta_hat)
double gesc_model_rhs(const ScalarMap& map, double k, double theta_hat);

/// Perturbation-based GESC: -k M(t) J(theta_hat + S(t))
double gesc_perturb_rhs(const ScalarMap& map, const EscParams& p, double t,
                        double theta_hat);

/// Averaged GESC: -k G(theta_bar)
double gesc_avg_rhs(const ScalarMap& map, const EscParams& p,
                    const QuadratureSpec& quad, double theta_bar);

// --- Newton ESC ---

/// Full NESC: with y = J(theta_hat + S(t)), G = M(t) y, H = N(t) y,
/// returns (-k Gamma G, omega_l Gamma (1 - Gamma H)).
/// Throws std::domain_error if Gamma_hat <= 0.
State2 nesc_rhs(const ScalarMap& map, const EscParams& p, double t,
                const NescState& s);

/// Averaged NESC: (-k Gamma G(theta), omega_l Gamma (1 - Gamma H(theta))).
State2 nesc_avg_rhs(const ScalarMap& map, const EscParams& p,
                    const QuadratureSpec& quad, const State2& s);

/// Full dynamics in (theta_err, gamma_err) coordinates.
State2 nesc_error_rhs(const ScalarMap& map, const EscParams& p,
                      const ErrorFrame& frame, double t,
                      const ErrorStateLog& s);

/// Averaged dynamics in (theta_err, gamma_err):
///   (-k e^g G/H, omega_l (1 - e^g) - k e^g G H'/H^2)
State2 nesc_avg_error_rhs(const ScalarMap& map, const EscParams& p,
                          const ErrorFrame& frame, const ErrorStateLog& s);

/// Averaged dynamics in (theta_err, Gamma_err), the affine-shifted form of
/// the averaged NESC; gamma_star = 1/H(theta_bar_star).
State2 nesc_gamma_error_avg_rhs(const ScalarMap& map, const EscParams& p,
                                const ErrorFrame& frame, double gamma_star,
                                const ErrorStateGamma& s);

}  // namespace escl
