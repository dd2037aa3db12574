// Acceptance suite: eight end-to-end checks, one pass/fail line each.
// Exits nonzero if any check fails.
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "escl/simulate.hpp"
#include "escl/stability.hpp"

using namespace escl;

namespace {

int g_failures = 0;

void report(int idx, const char* title, bool pass, const std::string& detail) {
  std::printf("criterion %d [%s]: %s (%s)\n", idx, pass ? "PASS" : "FAIL",
              title, detail.c_str());
  if (!pass) ++g_failures;
}

EscParams fig3_params(double omega = 10.0) {
  return EscParams(DitherSpec(0.5, omega), 0.001, 0.001);
}

// 1. Full Newton ESC trajectory pinned near the averaged equilibrium.
void criterion_1() {
  const auto map = builtin_map("paper-example");
  const auto p = fig3_params();
  const QuadratureSpec quad;
  const double ts = find_equilibrium(map, 0.5, 1e-12, quad).theta_bar_star;

  const double dt = p.dither.period() / 200.0;
  const IntegrationSpec spec(dt, 1e4, 20);

  bool pass = true;
  double worst = 0.0;
  for (const State2& ic : {State2(1.0, 5.0 / 6.0), State2(1.0, 5.0 / 3.0)}) {
    auto rhs = [&](double t, const Vector& x) {
      return Vector(nesc_rhs(map, p, t, NescState{x[0], x[1]}));
    };
    const auto traj = integrate(rhs, Vector(ic), spec, 1);
    if (traj.status != IntegrationStatus::ok) {
      pass = false;
      continue;
    }
    for (size_t i = 0; i < traj.times.size(); ++i) {
      if (traj.times[i] <= 8000.0) continue;
      const double err = std::fabs(traj.states[i][0] - ts);
      worst = std::max(worst, err);
      if (err >= 1e-2) pass = false;
    }
  }
  report(1, "trajectory settles within 1e-2 of equilibrium after t=8000", pass,
         "max |theta error| on (8000,1e4] = " + std::to_string(worst));
}

// 2. Quadratic map: averaged estimates exact, assignable Newton rate.
void criterion_2() {
  const auto map = builtin_map("quadratic");
  const QuadratureSpec quad;
  bool pass = true;
  double worst = 0.0;
  for (double a : {0.1, 0.5, 2.0})
    for (int i = 0; i <= 40; ++i) {
      const double th = -2.0 + 0.1 * i;
      const double eg = std::fabs(avg_gradient(map, th, a, quad) - 2.0 * th);
      const double eh = std::fabs(avg_hessian(map, th, a, quad) - 2.0);
      worst = std::max({worst, eg, eh});
      if (eg >= 1e-12 || eh >= 1e-12) pass = false;
    }
  for (auto [k, wl] : {std::pair{0.001, 0.001}, {0.2, 0.05}, {3.0, 1.0}}) {
    const auto [e1, e2] =
        linearize(map, EscParams(DitherSpec(0.5, 10.0), k, wl), 0.5, quad);
    if (std::fabs(e1 + k) >= 1e-12 || std::fabs(e2 + wl) >= 1e-12) pass = false;
    worst = std::max({worst, std::fabs(e1 + k), std::fabs(e2 + wl)});
  }
  report(2, "quadratic averaged estimates exact, rate assignable", pass,
         "max deviation = " + std::to_string(worst));
}

// 3. Property suite for the averaged estimates on two strictly convex maps.
void criterion_3() {
  const QuadratureSpec quad;
  bool pass = true;
  int violations = 0;
  for (const char* name : {"paper-example", "quartic"}) {
    const auto map = builtin_map(name);
    for (double a : {0.1, 0.5, 1.0}) {
      double prev_g = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < 61; ++i) {
        const double th = -3.0 + 0.1 * i;
        const double g = avg_gradient(map, th, a, quad);
        const double h = avg_hessian(map, th, a, quad);
        const auto [lo, hi] = gradient_bounds(map, th, a);
        const double b = hessian_lower_bound(map, th, a);
        if (!(g > prev_g)) ++violations;         // strictly increasing
        if (!(h > 0.0)) ++violations;            // positive everywhere
        if (!(lo < g && g < hi)) ++violations;   // sandwich bounds
        if (!(b > 0.0 && h > b)) ++violations;   // closed-form lower bound
        prev_g = g;
      }
    }
  }
  pass = violations == 0;
  report(3, "monotone/positive/sandwich/lower-bound properties", pass,
         std::to_string(violations) + " violations over 2 maps x 3 amplitudes");
}

// 4. Equilibrium inside the bias bracket, matching a dense-scan oracle.
void criterion_4() {
  const auto map = builtin_map("paper-example");
  const QuadratureSpec quad;
  const double a = 0.5;
  const auto eq = find_equilibrium(map, a, 1e-12, quad);
  const double theta_min = *map.known_minimizer;

  bool pass = eq.theta_bar_star > theta_min - a &&
              eq.theta_bar_star < theta_min + a && eq.residual < 1e-10;

  // independent oracle: dense scan for the sign change + secant refinement
  const int n = 10000;
  double oracle = std::numeric_limits<double>::quiet_NaN();
  double prev_th = theta_min - a;
  double prev_g = avg_gradient(map, prev_th, a, quad);
  for (int i = 1; i <= n; ++i) {
    const double th = theta_min - a + 2.0 * a * i / n;
    const double g = avg_gradient(map, th, a, quad);
    if (prev_g < 0.0 && g >= 0.0) {
      oracle = prev_th - prev_g * (th - prev_th) / (g - prev_g);
      break;
    }
    prev_th = th;
    prev_g = g;
  }
  const double diff = std::fabs(oracle - eq.theta_bar_star);
  pass = pass && std::isfinite(diff) && diff < 1e-8;
  report(4, "equilibrium bracket and dense-scan agreement", pass,
         "theta_bar_star = " + std::to_string(eq.theta_bar_star) +
             ", |scan - bisect| = " + std::to_string(diff));
}

// 5. Lyapunov certificate on the grid plus derivative self-consistency.
void criterion_5() {
  const auto map = builtin_map("paper-example");
  const auto p = fig3_params();
  const QuadratureSpec quad;
  const double ts = find_equilibrium(map, 0.5, 1e-12, quad).theta_bar_star;
  const double beta = compute_beta();

  const auto grid = lyapunov_grid(map, p, ts, beta, quad, 61, 61, 3.0, 3.0);
  bool pass = grid.pass() && grid.min_v_off_origin > 0.0 &&
              grid.max_vdot_off_origin < 0.0;

  // V-dot closed form vs finite difference of V along the averaged flow
  std::mt19937 rng(20260824);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const ErrorFrame frame{ts, &quad};
  int checked = 0;
  double worst_rel = 0.0;
  while (checked < 100) {
    const ErrorStateLog s{u(rng), u(rng)};
    if (std::hypot(s.theta_err, s.gamma_err) < 0.05) continue;
    ++checked;
    const State2 f = nesc_avg_error_rhs(map, p, frame, s);
    // Richardson-extrapolated central difference along the flow direction
    auto central = [&](double h) {
      const ErrorStateLog sp{s.theta_err + h * f[0], s.gamma_err + h * f[1]};
      const ErrorStateLog sm{s.theta_err - h * f[0], s.gamma_err - h * f[1]};
      return (lyapunov_value(map, 0.5, ts, sp, beta, quad) -
              lyapunov_value(map, 0.5, ts, sm, beta, quad)) /
             (2.0 * h);
    };
    const double fd = (4.0 * central(0.25) - central(0.5)) / 3.0;
    const double vd = lyapunov_dot(map, p, ts, s, beta, quad);
    const double rel = std::fabs(fd - vd) / std::max(std::fabs(vd), 1e-12);
    worst_rel = std::max(worst_rel, rel);
    if (rel >= 1e-6) pass = false;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "min V = %.3g, max Vdot = %.3g, worst FD rel err = %.3g",
                grid.min_v_off_origin, grid.max_vdot_off_origin, worst_rel);
  report(5, "Lyapunov certificate and derivative consistency", pass, buf);
}

// 6. Period averages of the full right-hand sides match the averaged ones.
void criterion_6() {
  const auto map = builtin_map("paper-example");
  const auto p = fig3_params();
  const QuadratureSpec quad;
  const double T = p.dither.period();
  const int n_t = 4096;

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uth(-2.0, 2.0);
  std::uniform_real_distribution<double> ug(0.2, 3.0);
  bool pass = true;
  double worst = 0.0;
  for (int s = 0; s < 50; ++s) {
    const double th = uth(rng), gam = ug(rng);
    State2 acc_n = State2::Zero();
    double acc_g = 0.0;
    for (int i = 0; i < n_t; ++i) {
      const double t = i * T / n_t;
      acc_n += nesc_rhs(map, p, t, NescState{th, gam});
      acc_g += gesc_perturb_rhs(map, p, t, th);
    }
    const double en =
        (acc_n / double(n_t) - nesc_avg_rhs(map, p, quad, State2(th, gam)))
            .norm();
    const double eg =
        std::fabs(acc_g / n_t - gesc_avg_rhs(map, p, quad, th));
    worst = std::max({worst, en, eg});
    if (en >= 1e-8 || eg >= 1e-8) pass = false;
  }
  char buf[80];
  std::snprintf(buf, sizeof(buf), "worst period-average gap = %.3g", worst);
  report(6, "full vs averaged right-hand sides over 50 frozen states", pass,
         buf);
}

// 7. Larger dither frequency shrinks the residual neighborhood. The
// horizon is twice the reference trajectory's so the omega-independent
// averaged transient decays below the O(1/omega) ripple before the tail
// window opens; at 1e4 every tail radius is still transient-dominated
// (~7e-2 for all omega) and the trend is vacuous.
void criterion_7() {
  const auto map = builtin_map("paper-example");
  const auto rep = practical_stability_sweep(
      map, fig3_params(), {5.0, 10.0, 20.0, 40.0},
      {State2(1.0, 5.0 / 6.0), State2(1.0, 5.0 / 3.0)}, 2e4, 0.05);
  bool any_exit = false;
  for (const auto& r : rep.runs) any_exit |= r.domain_exit;
  const bool pass = rep.monotone_radius && !any_exit;
  std::string radii;
  for (double r : rep.radius_per_omega) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%.3g", radii.empty() ? "" : ", ", r);
    radii += buf;
  }
  report(7, "tail radius nonincreasing in omega", pass,
         "radii over {5,10,20,40} = [" + radii + "]");
}

// 8. The averaged Jacobian is strictly negative where the model-based
// gradient law is degenerate.
void criterion_8() {
  const auto map = builtin_map("paper-example");
  const QuadratureSpec quad;
  const double k = 0.001;
  const double theta_min = *map.known_minimizer;
  const double model_jac = -k * map.hess(theta_min);
  const double ts = find_equilibrium(map, 0.5, 1e-12, quad).theta_bar_star;
  const double avg_jac = -k * avg_gradient_deriv(map, ts, 0.5, quad);
  const bool pass = model_jac == 0.0 && avg_jac < 0.0;
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "model-based jacobian = %.3g, averaged jacobian = %.6g",
                model_jac, avg_jac);
  report(8, "degenerate model-based vs negative averaged Jacobian", pass, buf);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  std::printf("%s: %d of 8 criteria passed\n",
              g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              8 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
