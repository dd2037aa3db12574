#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "escl/averaging.hpp"

using namespace escl;

// Frozen oracle values, computed once with adaptive quadrature at 1e-14
// tolerance (and a dense sign scan plus bisection for the equilibrium).
namespace oracle {
constexpr double paper_G_at_0_a05 = 0.041247420154607126;
constexpr double paper_H_at_0_a05 = 0.570754776427644;
constexpr double paper_theta_bar_star_a05 = -0.051477738325605545;
constexpr double paper_gamma_star_a05 = 2.118080356904922;
}  // namespace oracle

TEST_CASE("quadrature spec validation") {
  CHECK_THROWS_AS(QuadratureSpec(8), std::invalid_argument);
  CHECK(QuadratureSpec(16).n_nodes() == 16);
  CHECK(QuadratureSpec().n_nodes() == 512);
}

TEST_CASE("zero amplitude rejected") {
  const auto m = builtin_map("quadratic");
  const QuadratureSpec q;
  CHECK_THROWS_AS(avg_gradient(m, 0.0, 0.0, q), std::invalid_argument);
  CHECK_THROWS_AS(avg_hessian(m, 0.0, 0.0, q), std::invalid_argument);
  CHECK_THROWS_AS(gradient_bounds(m, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hessian_lower_bound(m, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(find_equilibrium(m, 0.0, 1e-10, q), std::invalid_argument);
}

TEST_CASE("quadratic exactness: averages coincide with true derivatives") {
  const auto m = builtin_map("quadratic");
  const QuadratureSpec q;
  for (double a : {0.1, 0.5, 2.0}) {
    for (double th : {-2.0, -0.7, 0.0, 1.3, 2.0}) {
      CHECK(avg_gradient(m, th, a, q) == doctest::Approx(2.0 * th).epsilon(1e-12));
      CHECK(std::fabs(avg_hessian(m, th, a, q) - 2.0) < 1e-12);
      CHECK(std::fabs(avg_gradient_deriv(m, th, a, q) - 2.0) < 1e-12);
      CHECK(std::fabs(avg_hessian_deriv(m, th, a, q)) < 1e-12);
    }
  }
}

TEST_CASE("paper example at the minimizer") {
  const auto m = builtin_map("paper-example");
  const QuadratureSpec q;
  const double g = avg_gradient(m, 0.0, 0.5, q);
  CHECK(g > 0.0);
  CHECK(g == doctest::Approx(oracle::paper_G_at_0_a05).epsilon(1e-10));
  // averaged Hessian strictly positive even though J''(0) = 0
  const double h = avg_hessian(m, 0.0, 0.5, q);
  CHECK(h > 0.0);
  CHECK(h == doctest::Approx(oracle::paper_H_at_0_a05).epsilon(1e-10));
  CHECK(avg_gradient_deriv(m, 0.0, 0.5, q) > 0.0);
}

TEST_CASE("averages are even in the dither amplitude") {
  const QuadratureSpec q;
  for (const auto& name : {"paper-example", "quartic", "abs-smooth"}) {
    const auto m = builtin_map(name);
    for (double th : {-1.1, 0.0, 0.6}) {
      CHECK(avg_gradient(m, th, 0.5, q) ==
            doctest::Approx(avg_gradient(m, th, -0.5, q)).epsilon(1e-13));
      CHECK(avg_hessian(m, th, 0.5, q) ==
            doctest::Approx(avg_hessian(m, th, -0.5, q)).epsilon(1e-13));
    }
  }
}

TEST_CASE("quartic averaged Hessian closed form: 12 theta^2 + 2 a^2") {
  // trig-moment oracle: J(t+a sin) expands in sin powers; the surviving
  // moments give H(theta) = 12 theta^2 + 2 a^2 exactly
  const auto m = builtin_map("quartic");
  const QuadratureSpec q;
  for (double a : {0.25, 0.5, 1.0})
    for (double th : {0.0, -0.8, 1.2})
      CHECK(avg_hessian(m, th, a, q) ==
            doctest::Approx(12.0 * th * th + 2.0 * a * a).epsilon(1e-12));
}

TEST_CASE("monotonicity of the averaged gradient (grid)") {
  const QuadratureSpec q;
  for (const auto& name : builtin_map_names()) {
    const auto m = builtin_map(name);
    for (double a : {0.1, 0.5, 1.0}) {
      double prev = -std::numeric_limits<double>::infinity();
      for (int i = 0; i <= 60; ++i) {
        const double th = -3.0 + 0.1 * i;
        const double g = avg_gradient(m, th, a, q);
        CHECK(g > prev);
        CHECK(avg_gradient_deriv(m, th, a, q) > 0.0);
        prev = g;
      }
    }
  }
}

TEST_CASE("positivity of the averaged Hessian (grid)") {
  const QuadratureSpec q;
  for (const auto& name : builtin_map_names()) {
    const auto m = builtin_map(name);
    for (double a : {0.1, 0.5, 1.0})
      for (int i = 0; i <= 60; ++i)
        CHECK(avg_hessian(m, -3.0 + 0.1 * i, a, q) > 0.0);
  }
}

TEST_CASE("gradient sandwich bounds") {
  const QuadratureSpec q;
  const auto quad2 = builtin_map("quadratic");
  auto [lo2, hi2] = gradient_bounds(quad2, 1.0, 0.5);
  CHECK(lo2 == doctest::Approx(1.0));
  CHECK(hi2 == doctest::Approx(3.0));
  CHECK(avg_gradient(quad2, 1.0, 0.5, q) == doctest::Approx(2.0));

  const auto quartic = builtin_map("quartic");
  auto [lo4, hi4] = gradient_bounds(quartic, 0.0, 1.0);
  CHECK(lo4 == doctest::Approx(-4.0));
  CHECK(hi4 == doctest::Approx(4.0));
  CHECK(std::fabs(avg_gradient(quartic, 0.0, 1.0, q)) < 1e-12);

  for (const auto& name : builtin_map_names()) {
    const auto m = builtin_map(name);
    for (double a : {0.1, 0.5, 1.0}) {
      for (int i = 0; i <= 60; ++i) {
        const double th = -3.0 + 0.1 * i;
        const auto [lo, hi] = gradient_bounds(m, th, a);
        const double g = avg_gradient(m, th, a, q);
        CHECK(lo < g);
        CHECK(g < hi);
      }
    }
  }
}

TEST_CASE("closed-form Hessian lower bound") {
  // quadratic: the bound is independent of theta and a;
  // frozen: 3(2 sqrt 2 - 1)/(8 pi) + 3/pi
  const auto quad2 = builtin_map("quadratic");
  const double expect = 1.1731820697913653;
  for (double th : {-1.0, 0.0, 2.0})
    for (double a : {0.1, 0.5, 2.0}) {
      const double b = hessian_lower_bound(quad2, th, a);
      CHECK(b == doctest::Approx(expect).epsilon(1e-12));
      CHECK(b > 0.0);
      CHECK(b < 2.0);
    }

  const auto paper = builtin_map("paper-example");
  CHECK(hessian_lower_bound(paper, 0.0, 0.5) ==
        doctest::Approx(0.2948014633017147).epsilon(1e-12));

  const QuadratureSpec q;
  for (const auto& name : builtin_map_names()) {
    const auto m = builtin_map(name);
    for (double a : {0.1, 0.5, 1.0}) {
      for (int i = 0; i <= 40; ++i) {
        const double th = -2.0 + 0.1 * i;
        const double bound = hessian_lower_bound(m, th, a);
        CHECK(bound > 0.0);
        CHECK(avg_hessian(m, th, a, q) > bound);
      }
    }
  }
}

TEST_CASE("equilibrium location") {
  const QuadratureSpec q;
  {
    const auto r = find_equilibrium(builtin_map("quadratic"), 0.5, 1e-12, q);
    CHECK(std::fabs(r.theta_bar_star) < 1e-12);
    CHECK(r.gamma_star == doctest::Approx(0.5).epsilon(1e-12));
  }
  {
    const auto r = find_equilibrium(builtin_map("quartic"), 0.5, 1e-12, q);
    CHECK(std::fabs(r.theta_bar_star) < 1e-12);
  }
  {
    const auto r = find_equilibrium(builtin_map("paper-example"), 0.5, 1e-10, q);
    CHECK(r.theta_bar_star < 0.0);
    CHECK(r.theta_bar_star > -0.5);
    CHECK(r.theta_bar_star ==
          doctest::Approx(oracle::paper_theta_bar_star_a05).epsilon(1e-8));
    CHECK(r.gamma_star ==
          doctest::Approx(oracle::paper_gamma_star_a05).epsilon(1e-8));
    CHECK(r.residual < 1e-9);
    CHECK(r.gamma_star > 0.0);
    CHECK(r.theta_bar_star > r.bracket_lo);
    CHECK(r.theta_bar_star < r.bracket_hi);
  }
  // a map without a known minimizer cannot be bracketed
  ScalarMap anon = builtin_map("quadratic");
  anon.known_minimizer.reset();
  CHECK_THROWS_AS(find_equilibrium(anon, 0.5, 1e-10, q), std::invalid_argument);
  // concave map: averaged gradient decreasing, sign condition fails
  ScalarMap concave;
  concave.name = "concave";
  concave.eval = [](double t) { return -t * t; };
  concave.grad = [](double t) { return -2.0 * t; };
  concave.hess = [](double) { return -2.0; };
  concave.known_minimizer = 0.0;
  CHECK_THROWS_AS(find_equilibrium(concave, 0.5, 1e-10, q), std::runtime_error);
}

TEST_CASE("quadrature convergence: 512 vs 1024 nodes") {
  const QuadratureSpec q512(512), q1024(1024);
  for (const auto& name : builtin_map_names()) {
    const auto m = builtin_map(name);
    for (int i = 0; i <= 12; ++i) {
      const double th = -3.0 + 0.5 * i;
      CHECK(std::fabs(avg_gradient(m, th, 0.5, q512) -
                      avg_gradient(m, th, 0.5, q1024)) < 1e-10);
      CHECK(std::fabs(avg_hessian(m, th, 0.5, q512) -
                      avg_hessian(m, th, 0.5, q1024)) < 1e-10);
    }
  }
}
