#pragma once

#include <array>
#include <string>
#include <vector>

namespace escl {

/// One experiment record: everything a CLI command needs, serializable
/// to a single JSON document so each figure has a diffable config.
struct RunConfig {
  std::string map = "paper-example";
  std::string coord = "full";
  double a = 0.5;
  double omega = 10.0;
  double k = 0.001;
  double omega_l = 0.001;
  double dt = 0.0;  // 0 = derive (2pi/omega)/200
  double t_final = 10000.0;
  int record_every = 200;
  std::vector<std::vector<double>> initial_states;
  std::string out_dir = ".";
  // command-specific options
  double grid_lo = -3.0;
  double grid_hi = 3.0;
  int grid_n = 61;
  double tol = 1e-10;
  std::vector<double> omega_grid;
  double horizon = 10000.0;
  double target_radius = 0.05;
  std::vector<double> settle_thresholds = {1e-2, 1e-3};

  double effective_dt() const;

  std::string to_json() const;
  static RunConfig from_json(const std::string& text);
  static RunConfig load(const std::string& path);
};

bool operator==(const RunConfig& lhs, const RunConfig& rhs);

}  // namespace escl
