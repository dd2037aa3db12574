#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "escl/dynamics.hpp"

namespace escl {

using Vector = Eigen::VectorXd;
/// Right-hand side f(t, x) -> dx/dt.
using Rhs = std::function<Vector(double, const Vector&)>;

struct IntegrationSpec {
  double dt;
  double t_final;
  int record_every = 1;

  IntegrationSpec(double dt_, double t_final_, int record_every_ = 1)
      : dt(dt_), t_final(t_final_), record_every(record_every_) {
    if (!(dt > 0.0)) throw std::invalid_argument("IntegrationSpec: dt must be positive");
    if (!(t_final > 0.0))
      throw std::invalid_argument("IntegrationSpec: t_final must be positive");
    if (record_every < 1)
      throw std::invalid_argument("IntegrationSpec: record_every must be >= 1");
  }
};

enum class IntegrationStatus { ok, domain_exit, numerical_blowup };

struct Trajectory {
  double t0 = 0.0;
  double dt_record = 0.0;
  std::vector<double> times;
  std::vector<Vector> states;
  IntegrationStatus status = IntegrationStatus::ok;
  /// Populated on domain_exit / numerical_blowup: last valid state and time.
  double exit_time = 0.0;
  Vector last_valid_state;
  std::string coord_system;
  std::string map_name;
};

/// Classical fixed-step RK4. If guard_index is set, the integration halts
/// with a domain-exit diagnostic as soon as that state component would
/// become <= 0; the trajectory never records a guard-violating state.
/// Non-finite states halt with numerical_blowup.
Trajectory integrate(const Rhs& rhs, const Vector& x0,
                     const IntegrationSpec& spec,
                     std::optional<int> guard_index = std::nullopt,
                     double t0 = 0.0);

/// Observed convergence order by Richardson: integrates at dt, dt/2, dt/4
/// and returns log2 of the error ratio at t_final. ~4 on smooth problems.
double step_convergence_order(const Rhs& rhs, const Vector& x0,
                              const IntegrationSpec& spec);

}  // namespace escl
