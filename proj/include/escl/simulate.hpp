#pragma once

#include <string>
#include <vector>

#include "escl/integrate.hpp"

namespace escl {

/// One simulatable system: a right-hand side in a named coordinate
/// system, its state component names, and whether the sensor output y
/// accompanies each sample in trajectory CSVs.
struct SimSystem {
  std::string coord;
  std::vector<std::string> state_names;
  Rhs rhs;
  std::optional<int> guard_index;
  bool has_sensor_output = false;
  /// y = J(theta + S(t)) for full systems; first state is theta-like.
  std::function<double(double, const Vector&)> sensor_output;
};

/// Coordinate-system identifiers: `full`, `avg`, `err-log`, `err-gamma`,
/// `gesc-model`, `gesc-full`, `gesc-avg`. The err-log system integrates
/// the full time-varying error dynamics; err-gamma integrates the
/// averaged affine-error dynamics. Error systems resolve theta_bar_star
/// from the map's equilibrium at construction.
/// Throws std::invalid_argument for an unknown identifier.
SimSystem make_system(const std::string& coord, const ScalarMap& map,
                      const EscParams& params, const QuadratureSpec& quad);

std::vector<std::string> coord_system_names();

/// Writes a trajectory as CSV: header `t,<state names>[,y]`, one row per
/// recorded sample, floats at 17 significant digits.
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const SimSystem& sys);

}  // namespace escl
