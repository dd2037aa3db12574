#include "escl/averaging.hpp"

#include <cmath>
#include <stdexcept>

namespace escl {

QuadratureSpec::QuadratureSpec(int n_nodes) {
  if (n_nodes < 16)
    throw std::invalid_argument("QuadratureSpec: n_nodes must be >= 16");
  sin_tau_.resize(n_nodes);
  sin2_centered_.resize(n_nodes);
  for (int j = 0; j < n_nodes; ++j) {
    const double tau = 2.0 * M_PI * j / n_nodes;
    const double s = std::sin(tau);
    sin_tau_[j] = s;
    sin2_centered_[j] = s * s - 0.5;
  }
}

namespace {

void require_nonzero_amplitude(double a, const char* op) {
  if (a == 0.0)
    throw std::invalid_argument(std::string(op) + ": amplitude a must be nonzero");
}

double weighted_average(const std::function<double(double)>& f,
                        double theta_bar, double a,
                        const Eigen::ArrayXd& sin_tau,
                        const Eigen::ArrayXd& weights) {
  const int n = int(sin_tau.size());
  double acc = 0.0;
  for (int j = 0; j < n; ++j) acc += weights[j] * f(theta_bar + a * sin_tau[j]);
  // equal-weight periodic trapezoid: dtau = 2pi/n
  return acc * (2.0 * M_PI / n);
}

}  // namespace

double avg_gradient(const ScalarMap& map, double theta_bar, double a,
                    const QuadratureSpec& quad) {
  require_nonzero_amplitude(a, "avg_gradient");
  return weighted_average(map.eval, theta_bar, a, quad.sin_tau(),
                          quad.sin_tau()) /
         (a * M_PI);
}

double avg_hessian(const ScalarMap& map, double theta_bar, double a,
                   const QuadratureSpec& quad) {
  require_nonzero_amplitude(a, "avg_hessian");
  return 8.0 *
         weighted_average(map.eval, theta_bar, a, quad.sin_tau(),
                          quad.sin2_centered()) /
         (a * a * M_PI);
}

double avg_gradient_deriv(const ScalarMap& map, double theta_bar, double a,
                          const QuadratureSpec& quad) {
  require_nonzero_amplitude(a, "avg_gradient_deriv");
  return weighted_average(map.grad, theta_bar, a, quad.sin_tau(),
                          quad.sin_tau()) /
         (a * M_PI);
}

double avg_hessian_deriv(const ScalarMap& map, double theta_bar, double a,
                         const QuadratureSpec& quad) {
  require_nonzero_amplitude(a, "avg_hessian_deriv");
  return 8.0 *
         weighted_average(map.grad, theta_bar, a, quad.sin_tau(),
                          quad.sin2_centered()) /
         (a * a * M_PI);
}

std::pair<double, double> gradient_bounds(const ScalarMap& map,
                                          double theta_bar, double a) {
  require_nonzero_amplitude(a, "gradient_bounds");
  const double r = std::fabs(a);
  return {map.grad(theta_bar - r), map.grad(theta_bar + r)};
}

double hessian_lower_bound(const ScalarMap& map, double theta_bar, double a) {
  require_nonzero_amplitude(a, "hessian_lower_bound");
  const double r = std::fabs(a);
  const double c = r / std::sqrt(2.0);
  const double curvature_gap = 0.5 * map.eval(theta_bar + c) +
                               0.5 * map.eval(theta_bar - c) -
                               map.eval(theta_bar);
  const double hess_int = map.grad(theta_bar + c) - map.grad(theta_bar - c);
  return 3.0 * (2.0 * std::sqrt(2.0) - 1.0) / (4.0 * M_PI * r * r) *
             curvature_gap +
         3.0 * std::sqrt(2.0) / (4.0 * M_PI * r) * hess_int;
}

EquilibriumResult find_equilibrium(const ScalarMap& map, double a, double tol,
                                   const QuadratureSpec& quad) {
  require_nonzero_amplitude(a, "find_equilibrium");
  if (!(tol > 0.0))
    throw std::invalid_argument("find_equilibrium: tol must be positive");
  if (!map.known_minimizer)
    throw std::invalid_argument(
        "find_equilibrium: map has no known minimizer to bracket around");

  const double r = std::fabs(a);
  double lo = *map.known_minimizer - r;
  double hi = *map.known_minimizer + r;
  double g_lo = avg_gradient(map, lo, a, quad);
  double g_hi = avg_gradient(map, hi, a, quad);
  if (!(g_lo < 0.0 && g_hi > 0.0))
    throw std::runtime_error(
        "find_equilibrium: averaged gradient does not change sign on "
        "(theta*-a, theta*+a); map may be non-convex or misconfigured");

  EquilibriumResult res;
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  int iters = 0;
  while (hi - lo >= tol) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = avg_gradient(map, mid, a, quad);
    if (g_mid < 0.0)
      lo = mid;
    else
      hi = mid;
    ++iters;
    if (iters > 200) break;  // bracket width below double resolution
  }
  res.theta_bar_star = 0.5 * (lo + hi);
  res.iterations = iters;
  res.residual = std::fabs(avg_gradient(map, res.theta_bar_star, a, quad));
  const double h_star = avg_hessian(map, res.theta_bar_star, a, quad);
  res.gamma_star = 1.0 / h_star;
  return res;
}

}  // namespace escl
