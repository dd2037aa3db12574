#include "escl/dynamics.hpp"

#include <cmath>

namespace escl {

double gesc_model_rhs(const ScalarMap& map, double k, double theta_hat) {
  return -k * map.grad(theta_hat);
}

double gesc_perturb_rhs(const ScalarMap& map, const EscParams& p, double t,
                        double theta_hat) {
  const double y = map.eval(theta_hat + perturbation(p.dither, t));
  return -p.k * demod_gradient(p.dither, t) * y;
}

double gesc_avg_rhs(const ScalarMap& map, const EscParams& p,
                    const QuadratureSpec& quad, double theta_bar) {
  return -p.k * avg_gradient(map, theta_bar, p.dither.amplitude, quad);
}

State2 nesc_rhs(const ScalarMap& map, const EscParams& p, double t,
                const NescState& s) {
  if (!(s.gamma_hat > 0.0))
    throw std::domain_error("nesc_rhs: Gamma_hat must stay positive");
  const double y = map.eval(s.theta_hat + perturbation(p.dither, t));
  const double g_est = demod_gradient(p.dither, t) * y;
  const double h_est = demod_hessian(p.dither, t) * y;
  return {-p.k * s.gamma_hat * g_est,
          p.omega_l * s.gamma_hat * (1.0 - s.gamma_hat * h_est)};
}

State2 nesc_avg_rhs(const ScalarMap& map, const EscParams& p,
                    const QuadratureSpec& quad, const State2& s) {
  const double theta = s[0], gamma = s[1];
  if (!(gamma > 0.0))
    throw std::domain_error("nesc_avg_rhs: Gamma_bar must stay positive");
  const double a = p.dither.amplitude;
  const double g = avg_gradient(map, theta, a, quad);
  const double h = avg_hessian(map, theta, a, quad);
  return {-p.k * gamma * g, p.omega_l * gamma * (1.0 - gamma * h)};
}

State2 nesc_error_rhs(const ScalarMap& map, const EscParams& p,
                      const ErrorFrame& frame, double t,
                      const ErrorStateLog& s) {
  const double a = p.dither.amplitude;
  const double theta_abs = s.theta_err + frame.theta_bar_star;
  const double h_bar = avg_hessian(map, theta_abs, a, *frame.quad);
  const double h_bar_prime = avg_hessian_deriv(map, theta_abs, a, *frame.quad);
  const double y = map.eval(theta_abs + perturbation(p.dither, t));
  const double g_est = demod_gradient(p.dither, t) * y;
  const double h_est = demod_hessian(p.dither, t) * y;
  const double eg = std::exp(s.gamma_err);
  const double dtheta = -p.k * eg * g_est / h_bar;
  const double dgamma = p.omega_l * (1.0 - eg * h_est / h_bar) -
                        p.k * eg * g_est * h_bar_prime / (h_bar * h_bar);
  return {dtheta, dgamma};
}

State2 nesc_avg_error_rhs(const ScalarMap& map, const EscParams& p,
                          const ErrorFrame& frame, const ErrorStateLog& s) {
  const double a = p.dither.amplitude;
  const double theta_abs = s.theta_err + frame.theta_bar_star;
  const double g_bar = avg_gradient(map, theta_abs, a, *frame.quad);
  const double h_bar = avg_hessian(map, theta_abs, a, *frame.quad);
  const double h_bar_prime = avg_hessian_deriv(map, theta_abs, a, *frame.quad);
  const double eg = std::exp(s.gamma_err);
  const double dtheta = -p.k * eg * g_bar / h_bar;
  const double dgamma = p.omega_l * (1.0 - eg) -
                        p.k * eg * g_bar * h_bar_prime / (h_bar * h_bar);
  return {dtheta, dgamma};
}

State2 nesc_gamma_error_avg_rhs(const ScalarMap& map, const EscParams& p,
                                const ErrorFrame& frame, double gamma_star,
                                const ErrorStateGamma& s) {
  const double gamma_abs = s.Gamma_err + gamma_star;
  if (!(gamma_abs > 0.0))
    throw std::domain_error(
        "nesc_gamma_error_avg_rhs: Gamma_err + Gamma_star must stay positive");
  const double a = p.dither.amplitude;
  const double theta_abs = s.theta_err + frame.theta_bar_star;
  const double g_bar = avg_gradient(map, theta_abs, a, *frame.quad);
  const double h_bar = avg_hessian(map, theta_abs, a, *frame.quad);
  return {-p.k * gamma_abs * g_bar,
          p.omega_l * gamma_abs * (1.0 - gamma_abs * h_bar)};
}

}  // namespace escl
