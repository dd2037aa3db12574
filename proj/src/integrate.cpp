#include "escl/integrate.hpp"

#include <cmath>

namespace escl {

namespace {

bool all_finite(const Vector& x) {
  for (int i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i])) return false;
  return true;
}

}  // namespace

Trajectory integrate(const Rhs& rhs, const Vector& x0,
                     const IntegrationSpec& spec,
                     std::optional<int> guard_index, double t0) {
  Trajectory traj;
  traj.t0 = t0;
  traj.dt_record = spec.dt * spec.record_every;

  if (guard_index && x0[*guard_index] <= 0.0)
    throw std::invalid_argument("integrate: initial state violates guard");

  const long n_steps = long(std::ceil(spec.t_final / spec.dt - 1e-9));
  traj.times.reserve(size_t(n_steps / spec.record_every) + 2);
  traj.states.reserve(size_t(n_steps / spec.record_every) + 2);

  Vector x = x0;
  double t = t0;
  traj.times.push_back(t);
  traj.states.push_back(x);

  const double h = spec.dt;
  for (long i = 0; i < n_steps; ++i) {
    Vector x_next;
    try {
      const Vector k1 = rhs(t, x);
      const Vector k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
      const Vector k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
      const Vector k4 = rhs(t + h, x + h * k3);
      x_next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const std::domain_error&) {
      // a guard-violating intermediate stage counts as leaving the domain
      traj.status = IntegrationStatus::domain_exit;
      traj.exit_time = t;
      traj.last_valid_state = x;
      return traj;
    }
    const double t_next = t0 + (i + 1) * h;

    if (!all_finite(x_next)) {
      traj.status = IntegrationStatus::numerical_blowup;
      traj.exit_time = t;
      traj.last_valid_state = x;
      return traj;
    }
    if (guard_index && x_next[*guard_index] <= 0.0) {
      traj.status = IntegrationStatus::domain_exit;
      traj.exit_time = t;
      traj.last_valid_state = x;
      return traj;
    }

    x = std::move(x_next);
    t = t_next;
    if ((i + 1) % spec.record_every == 0 || i + 1 == n_steps) {
      traj.times.push_back(t);
      traj.states.push_back(x);
    }
  }
  return traj;
}

double step_convergence_order(const Rhs& rhs, const Vector& x0,
                              const IntegrationSpec& spec) {
  auto final_state = [&](double dt) {
    IntegrationSpec s(dt, spec.t_final, 1 << 20);
    return integrate(rhs, x0, s).states.back();
  };
  const Vector x1 = final_state(spec.dt);
  const Vector x2 = final_state(spec.dt / 2.0);
  const Vector x4 = final_state(spec.dt / 4.0);
  const double e1 = (x1 - x2).norm();
  const double e2 = (x2 - x4).norm();
  return std::log2(e1 / e2);
}

}  // namespace escl
