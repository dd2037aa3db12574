#include "escl/scalar_map.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace escl {

namespace {

ScalarMap make_paper_example() {
  // J = u^2 with u = theta*(e^theta - 1)
  auto u = [](double t) { return t * (std::exp(t) - 1.0); };
  auto up = [](double t) { return (std::exp(t) - 1.0) + t * std::exp(t); };
  auto upp = [](double t) { return (2.0 + t) * std::exp(t); };
  ScalarMap m;
  m.name = "paper-example";
  m.formula = "theta^2*(exp(theta)-1)^2";
  m.eval = [u](double t) { return u(t) * u(t); };
  m.grad = [u, up](double t) { return 2.0 * u(t) * up(t); };
  m.hess = [u, up, upp](double t) {
    return 2.0 * (up(t) * up(t) + u(t) * upp(t));
  };
  m.known_minimizer = 0.0;
  return m;
}

ScalarMap make_quadratic() {
  ScalarMap m;
  m.name = "quadratic";
  m.formula = "theta^2";
  m.eval = [](double t) { return t * t; };
  m.grad = [](double t) { return 2.0 * t; };
  m.hess = [](double) { return 2.0; };
  m.known_minimizer = 0.0;
  return m;
}

ScalarMap make_quartic() {
  ScalarMap m;
  m.name = "quartic";
  m.formula = "theta^4";
  m.eval = [](double t) { return t * t * t * t; };
  m.grad = [](double t) { return 4.0 * t * t * t; };
  m.hess = [](double t) { return 12.0 * t * t; };
  m.known_minimizer = 0.0;
  return m;
}

ScalarMap make_abs_smooth() {
  // smooth surrogate for |theta|, strictly convex
  ScalarMap m;
  m.name = "abs-smooth";
  m.formula = "sqrt(1+theta^2)-1";
  m.eval = [](double t) { return std::sqrt(1.0 + t * t) - 1.0; };
  m.grad = [](double t) { return t / std::sqrt(1.0 + t * t); };
  m.hess = [](double t) {
    const double s = 1.0 + t * t;
    return 1.0 / (s * std::sqrt(s));
  };
  m.known_minimizer = 0.0;
  return m;
}

}  // namespace

std::vector<std::string> builtin_map_names() {
  return {"paper-example", "quadratic", "quartic", "abs-smooth"};
}

ScalarMap builtin_map(const std::string& name) {
  if (name == "paper-example") return make_paper_example();
  if (name == "quadratic") return make_quadratic();
  if (name == "quartic") return make_quartic();
  if (name == "abs-smooth") return make_abs_smooth();
  std::ostringstream os;
  os << "unknown map '" << name << "'; valid names:";
  for (const auto& n : builtin_map_names()) os << " " << n;
  throw std::invalid_argument(os.str());
}

ConvexityReport check_strict_convexity(const ScalarMap& map, double lo,
                                       double hi, int n_pairs) {
  if (!(lo < hi)) throw std::invalid_argument("check_strict_convexity: lo >= hi");
  if (n_pairs < 1) throw std::invalid_argument("check_strict_convexity: n_pairs < 1");

  static const double lambdas[] = {0.2, 0.5, 0.8};
  ConvexityReport report;
  report.strictly_convex_on_grid = true;
  report.min_hessian_integral = std::numeric_limits<double>::infinity();
  {
    std::ostringstream os;
    os << n_pairs << " stratified pairs on [" << lo << "," << hi
       << "], lambda in {0.2,0.5,0.8}";
    report.grid_spec = os.str();
  }

  const double span = hi - lo;
  for (int i = 0; i < n_pairs; ++i) {
    // stratified, deterministic: theta1 sweeps the interval, theta2 sits
    // a varying fraction of the remaining span to the right
    const double f1 = (i + 0.25) / n_pairs;
    const double f2 = 0.3 + 0.65 * ((i * 7) % n_pairs) / double(n_pairs);
    const double t1 = lo + f1 * span * 0.6;
    const double t2 = t1 + f2 * (hi - t1);
    report.min_hessian_integral =
        std::min(report.min_hessian_integral, map.grad(t2) - map.grad(t1));

    // first-order condition: J(t2) > J(t1) + J'(t1)(t2 - t1)
    const bool first_order_ok =
        map.eval(t2) > map.eval(t1) + map.grad(t1) * (t2 - t1);

    for (double lam : lambdas) {
      const double mid = lam * t1 + (1.0 - lam) * t2;
      const bool segment_ok =
          map.eval(mid) < lam * map.eval(t1) + (1.0 - lam) * map.eval(t2);
      if (!segment_ok || !first_order_ok) {
        report.strictly_convex_on_grid = false;
        if (!report.witness_violation)
          report.witness_violation = ConvexityWitness{t1, t2, lam};
      }
    }
  }
  return report;
}

double hessian_integral(const ScalarMap& map, double theta1, double theta2) {
  if (!(theta1 < theta2))
    throw std::invalid_argument("hessian_integral: theta1 >= theta2");
  return map.grad(theta2) - map.grad(theta1);
}

double hessian_integral_quadrature(const ScalarMap& map, double theta1,
                                   double theta2, int panels) {
  if (!(theta1 < theta2))
    throw std::invalid_argument("hessian_integral_quadrature: theta1 >= theta2");
  if (panels % 2) ++panels;  // Simpson needs an even panel count
  const double h = (theta2 - theta1) / panels;
  double acc = map.hess(theta1) + map.hess(theta2);
  for (int i = 1; i < panels; ++i)
    acc += (i % 2 ? 4.0 : 2.0) * map.hess(theta1 + i * h);
  return acc * h / 3.0;
}

std::string map_to_json(const ScalarMap& map) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"name\":\"" << map.name << "\",\"formula\":\"" << map.formula
     << "\"";
  if (map.known_minimizer)
    os << ",\"known_minimizer\":" << *map.known_minimizer;
  else
    os << ",\"known_minimizer\":null";
  os << "}";
  return os.str();
}

}  // namespace escl
