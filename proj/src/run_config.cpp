#include "escl/run_config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace escl {

using nlohmann::json;

double RunConfig::effective_dt() const {
  return dt > 0.0 ? dt : (2.0 * M_PI / omega) / 200.0;
}

std::string RunConfig::to_json() const {
  json j;
  j["map"] = map;
  j["coord"] = coord;
  j["a"] = a;
  j["omega"] = omega;
  j["k"] = k;
  j["omega_l"] = omega_l;
  j["dt"] = dt;
  j["t_final"] = t_final;
  j["record_every"] = record_every;
  j["initial_states"] = initial_states;
  j["out_dir"] = out_dir;
  j["grid_lo"] = grid_lo;
  j["grid_hi"] = grid_hi;
  j["grid_n"] = grid_n;
  j["tol"] = tol;
  j["omega_grid"] = omega_grid;
  j["horizon"] = horizon;
  j["target_radius"] = target_radius;
  j["settle_thresholds"] = settle_thresholds;
  return j.dump(2);
}

RunConfig RunConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  RunConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) {
      try {
        j.at(key).get_to(field);
      } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config field '") + key +
                                    "': " + e.what());
      }
    }
  };
  get("map", c.map);
  get("coord", c.coord);
  get("a", c.a);
  get("omega", c.omega);
  get("k", c.k);
  get("omega_l", c.omega_l);
  get("dt", c.dt);
  get("t_final", c.t_final);
  get("record_every", c.record_every);
  get("initial_states", c.initial_states);
  get("out_dir", c.out_dir);
  get("grid_lo", c.grid_lo);
  get("grid_hi", c.grid_hi);
  get("grid_n", c.grid_n);
  get("tol", c.tol);
  get("omega_grid", c.omega_grid);
  get("horizon", c.horizon);
  get("target_radius", c.target_radius);
  get("settle_thresholds", c.settle_thresholds);
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

bool operator==(const RunConfig& lhs, const RunConfig& rhs) {
  return lhs.to_json() == rhs.to_json();
}

}  // namespace escl
