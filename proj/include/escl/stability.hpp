#pragma once

#include <Eigen/Dense>
#include <vector>

#include "escl/dynamics.hpp"
#include "escl/integrate.hpp"

namespace escl {

struct GridViolation {
  double theta_err;
  double gamma_err;
  double value;
  const char* kind;  // "V<=0" or "Vdot>=0"
};

struct LyapunovGridReport {
  int n_theta = 0;
  int n_gamma = 0;
  double theta_lo = 0.0, theta_hi = 0.0;
  double gamma_lo = 0.0, gamma_hi = 0.0;
  double exclusion_radius = 0.0;
  double min_v_off_origin = 0.0;
  double max_vdot_off_origin = 0.0;
  double beta_used = 0.0;
  std::vector<GridViolation> violations;
  bool pass() const { return violations.empty(); }
};

struct SweepRun {
  double omega;
  int ic_index;
  bool domain_exit;
  double tail_radius;    // sup of error norm over the final tail window
  double entry_time;     // first time the error enters the target ball
  double fit_M;          // PES envelope fit, valid when fit_valid
  double fit_lambda;
  bool fit_valid;
};

struct PracticalStabilityReport {
  std::vector<double> omega_grid;
  std::vector<SweepRun> runs;
  /// max tail radius per omega, same order as omega_grid
  std::vector<double> radius_per_omega;
  bool monotone_radius = false;
};

/// Numerically maximizes |(e^g - 1)/(e^g - g)| over g (grid scan on
/// [-50, 50], then golden-section refinement) and returns the supremum
/// with a 1% safety margin. The denominator satisfies e^g - g >= 1, so
/// the expression is globally defined. Supremum before margin ~ 1.1885.
double compute_beta(double lo = -50.0, double hi = 50.0, double tol = 1e-12);

/// The ratio |(e^g - 1)/(e^g - g)| whose supremum defines beta.
double beta_ratio(double gamma);

/// Lyapunov candidate for the averaged log-error system:
///   V = theta_err^2/2
///     + beta * int_0^theta_err sgn(phi) |H'(phi+ts)| / H(phi+ts) dphi
///     + ln(e^gamma_err - gamma_err)
/// The middle integral uses composite Simpson (512 panels total), split
/// at the sign changes of H' so each piece integrates a smooth function.
double lyapunov_value(const ScalarMap& map, double a, double theta_bar_star,
                      const ErrorStateLog& s, double beta,
                      const QuadratureSpec& quad);

/// Lie derivative of lyapunov_value along the averaged log-error flow,
/// evaluated from its closed three-term form.
double lyapunov_dot(const ScalarMap& map, const EscParams& p,
                    double theta_bar_star, const ErrorStateLog& s, double beta,
                    const QuadratureSpec& quad);

/// Evaluates V and Vdot on a uniform grid, excluding a ball at the origin.
LyapunovGridReport lyapunov_grid(const ScalarMap& map, const EscParams& p,
                                 double theta_bar_star, double beta,
                                 const QuadratureSpec& quad, int n_theta = 61,
                                 int n_gamma = 61, double theta_span = 3.0,
                                 double gamma_span = 3.0,
                                 double exclusion_radius = 1e-3);

/// Eigenvalues of the averaged error-system linearization at the origin:
///   (-k G'(theta_bar_star) / H(theta_bar_star), -omega_l)
std::pair<double, double> linearize(const ScalarMap& map, const EscParams& p,
                                    double a, const QuadratureSpec& quad);

/// Integrates the full NESC over an omega grid and measures per-run tail
/// error radius and target-ball entry time, then fits the exponential
/// envelope (M, lambda) to the pre-floor portion of the error norm.
PracticalStabilityReport practical_stability_sweep(
    const ScalarMap& map, const EscParams& params_template,
    const std::vector<double>& omega_grid,
    const std::vector<State2>& init_set, double horizon,
    double target_radius = 0.05);

}  // namespace escl
