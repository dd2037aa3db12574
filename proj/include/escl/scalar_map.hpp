#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace escl {

/// A scalar cost map together with its analytic first and second
/// derivatives. Derivatives are hand-coded closed forms, not finite
/// differences, so tests can compare against central differences.
struct ScalarMap {
  std::string name;
  std::string formula;  // human-readable, for JSON export
  std::function<double(double)> eval;
  std::function<double(double)> grad;
  std::function<double(double)> hess;
  std::optional<double> known_minimizer;
};

/// Result of the grid-based strict-convexity certification.
struct ConvexityWitness {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double lambda = 0.0;
};

struct ConvexityReport {
  bool strictly_convex_on_grid = false;
  std::optional<ConvexityWitness> witness_violation;
  double min_hessian_integral = 0.0;
  std::string grid_spec;
};

/// Looks up a builtin map by name. Registry:
/// "paper-example", "quadratic", "quartic", "abs-smooth".
/// Throws std::invalid_argument naming the valid entries on a miss.
ScalarMap builtin_map(const std::string& name);

/// Names of all registered builtin maps.
std::vector<std::string> builtin_map_names();

/// Certifies strict convexity on a deterministic stratified grid of
/// (theta1, theta2, lambda) triples over [lo, hi]. Checks both the
/// segment inequality and the first-order supporting-line inequality;
/// the report carries a violating witness when either fails.
ConvexityReport check_strict_convexity(const ScalarMap& map, double lo,
                                       double hi, int n_pairs);

/// Integral of the second derivative over [theta1, theta2], evaluated
/// exactly as grad(theta2) - grad(theta1). Requires theta1 < theta2.
double hessian_integral(const ScalarMap& map, double theta1, double theta2);

/// Same integral by composite Simpson on hess; cross-check path only.
double hessian_integral_quadrature(const ScalarMap& map, double theta1,
                                   double theta2, int panels = 256);

/// JSON export of a map definition (name, formula, minimizer).
std::string map_to_json(const ScalarMap& map);

}  // namespace escl
