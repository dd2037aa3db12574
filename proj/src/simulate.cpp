#include "escl/simulate.hpp"

#include <fstream>

#include "escl/csv.hpp"

namespace escl {

std::vector<std::string> coord_system_names() {
  return {"full",       "avg",       "err-log", "err-gamma",
          "gesc-model", "gesc-full", "gesc-avg"};
}

SimSystem make_system(const std::string& coord, const ScalarMap& map,
                      const EscParams& params, const QuadratureSpec& quad) {
  SimSystem sys;
  sys.coord = coord;

  auto full_sensor = [map, params](double t, const Vector& x) {
    return map.eval(x[0] + perturbation(params.dither, t));
  };

  if (coord == "full") {
    sys.state_names = {"theta_hat", "Gamma_hat"};
    sys.guard_index = 1;
    sys.has_sensor_output = true;
    sys.sensor_output = full_sensor;
    sys.rhs = [map, params](double t, const Vector& x) {
      return Vector(nesc_rhs(map, params, t, NescState{x[0], x[1]}));
    };
  } else if (coord == "avg") {
    sys.state_names = {"theta_bar", "Gamma_bar"};
    sys.guard_index = 1;
    QuadratureSpec q = quad;
    sys.rhs = [map, params, q](double, const Vector& x) {
      return Vector(nesc_avg_rhs(map, params, q, State2(x[0], x[1])));
    };
  } else if (coord == "err-log") {
    sys.state_names = {"theta_err", "gamma_err"};
    sys.has_sensor_output = true;
    QuadratureSpec q = quad;
    const auto eq = find_equilibrium(map, params.dither.amplitude, 1e-12, q);
    const double ts = eq.theta_bar_star;
    sys.sensor_output = [map, params, ts](double t, const Vector& x) {
      return map.eval(x[0] + ts + perturbation(params.dither, t));
    };
    sys.rhs = [map, params, q, ts](double t, const Vector& x) {
      const ErrorFrame frame{ts, &q};
      return Vector(
          nesc_error_rhs(map, params, frame, t, ErrorStateLog{x[0], x[1]}));
    };
  } else if (coord == "err-gamma") {
    sys.state_names = {"theta_err", "Gamma_err"};
    QuadratureSpec q = quad;
    const auto eq = find_equilibrium(map, params.dither.amplitude, 1e-12, q);
    const double ts = eq.theta_bar_star;
    const double gs = eq.gamma_star;
    sys.rhs = [map, params, q, ts, gs](double, const Vector& x) {
      const ErrorFrame frame{ts, &q};
      return Vector(nesc_gamma_error_avg_rhs(map, params, frame, gs,
                                             ErrorStateGamma{x[0], x[1]}));
    };
  } else if (coord == "gesc-model") {
    sys.state_names = {"theta_hat"};
    sys.rhs = [map, params](double, const Vector& x) {
      Vector dx(1);
      dx[0] = gesc_model_rhs(map, params.k, x[0]);
      return dx;
    };
  } else if (coord == "gesc-full") {
    sys.state_names = {"theta_hat"};
    sys.has_sensor_output = true;
    sys.sensor_output = full_sensor;
    sys.rhs = [map, params](double t, const Vector& x) {
      Vector dx(1);
      dx[0] = gesc_perturb_rhs(map, params, t, x[0]);
      return dx;
    };
  } else if (coord == "gesc-avg") {
    sys.state_names = {"theta_bar"};
    QuadratureSpec q = quad;
    sys.rhs = [map, params, q](double, const Vector& x) {
      Vector dx(1);
      dx[0] = gesc_avg_rhs(map, params, q, x[0]);
      return dx;
    };
  } else {
    std::string valid;
    for (const auto& n : coord_system_names()) valid += " " + n;
    throw std::invalid_argument("unknown coordinate system '" + coord +
                                "'; valid:" + valid);
  }
  return sys;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const SimSystem& sys) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << "t";
  for (const auto& n : sys.state_names) out << "," << n;
  if (sys.has_sensor_output) out << ",y";
  out << "\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    out << fmt17(traj.times[i]);
    for (int c = 0; c < traj.states[i].size(); ++c)
      out << "," << fmt17(traj.states[i][c]);
    if (sys.has_sensor_output)
      out << "," << fmt17(sys.sensor_output(traj.times[i], traj.states[i]));
    out << "\n";
  }
}

}  // namespace escl
