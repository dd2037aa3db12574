#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <limits>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "escl/csv.hpp"
#include "escl/run_config.hpp"
#include "escl/simulate.hpp"
#include "escl/stability.hpp"

using namespace escl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

EscParams params_from(const RunConfig& c) {
  return EscParams(DitherSpec(c.a, c.omega), c.k, c.omega_l);
}

// first recorded time after which |err| stays below thr; NaN if it never does
double settle_time(const std::vector<double>& times,
                   const std::vector<double>& err, double thr) {
  long last_above = -1;
  for (long i = long(err.size()) - 1; i >= 0; --i)
    if (err[size_t(i)] >= thr) {
      last_above = i;
      break;
    }
  if (last_above + 1 >= long(err.size()))
    return std::numeric_limits<double>::quiet_NaN();
  return times[size_t(last_above + 1)];
}

int cmd_simulate(const RunConfig& cfg) {
  const auto map = builtin_map(cfg.map);
  const auto p = params_from(cfg);
  const QuadratureSpec quad;
  const auto sys = make_system(cfg.coord, map, p, quad);

  double dt = cfg.effective_dt();
  const bool time_varying = cfg.coord == "full" || cfg.coord == "gesc-full" ||
                            cfg.coord == "err-log";
  if (time_varying && dt > p.dither.period() / 50.0)
    throw std::invalid_argument(
        "dt too large to resolve the dither: need dt <= (2pi/omega)/50");

  fs::create_directories(cfg.out_dir);

  json summary;
  summary["config"] = json::parse(cfg.to_json());
  summary["map"] = json::parse(map_to_json(map));

  bool nesc_like = cfg.coord == "full" || cfg.coord == "avg";
  double ts = 0.0, gs = 0.0;
  if (nesc_like || cfg.coord == "err-log" || cfg.coord == "err-gamma" ||
      cfg.coord == "gesc-avg" || cfg.coord == "gesc-full") {
    const auto eq = find_equilibrium(map, cfg.a, 1e-12, quad);
    ts = eq.theta_bar_star;
    gs = eq.gamma_star;
    summary["theta_bar_star"] = ts;
    summary["gamma_star"] = gs;
  }

  int exit_code = 0;
  summary["runs"] = json::array();
  for (size_t i = 0; i < cfg.initial_states.size(); ++i) {
    const auto& ic = cfg.initial_states[i];
    if (ic.size() != sys.state_names.size())
      throw std::invalid_argument("initial state " + std::to_string(i) +
                                  " has wrong dimension for coordinate system " +
                                  cfg.coord);
    Vector x0(long(ic.size()));
    for (size_t c = 0; c < ic.size(); ++c) x0[long(c)] = ic[c];

    const IntegrationSpec spec(dt, cfg.t_final, cfg.record_every);
    const auto traj = integrate(sys.rhs, x0, spec, sys.guard_index);

    const std::string csv_path =
        (fs::path(cfg.out_dir) / ("traj_" + std::to_string(i) + ".csv")).string();
    write_trajectory_csv(csv_path, traj, sys);

    json run;
    run["ic_index"] = i;
    run["file"] = csv_path;
    run["status"] = traj.status == IntegrationStatus::ok ? "ok"
                    : traj.status == IntegrationStatus::domain_exit
                        ? "domain-exit"
                        : "numerical-blowup";
    if (traj.status != IntegrationStatus::ok) {
      run["exit_time"] = traj.exit_time;
      exit_code = 2;
    } else {
      const auto& xf = traj.states.back();
      for (size_t c = 0; c < sys.state_names.size(); ++c)
        run[std::string("final_") + sys.state_names[c]] = xf[long(c)];
      if (nesc_like) {
        run["final_theta_error"] = std::fabs(xf[0] - ts);
        run["final_gamma_error"] = std::fabs(xf[1] - gs);
        std::vector<double> err(traj.times.size());
        for (size_t s = 0; s < traj.times.size(); ++s)
          err[s] = std::fabs(traj.states[s][0] - ts);
        json settle;
        for (double thr : cfg.settle_thresholds)
          settle[fmt17(thr)] = settle_time(traj.times, err, thr);
        run["theta_settle_time"] = settle;
      }
    }
    summary["runs"].push_back(run);
  }

  std::ofstream out(fs::path(cfg.out_dir) / "summary.json");
  out << summary.dump(2) << "\n";
  std::cout << summary.dump(2) << std::endl;
  return exit_code;
}

int cmd_average_table(const RunConfig& cfg) {
  const auto map = builtin_map(cfg.map);
  const QuadratureSpec quad;
  fs::create_directories(cfg.out_dir);
  const std::string path =
      (fs::path(cfg.out_dir) / "average_table.csv").string();
  std::ofstream out(path);
  out << "theta,G_avg,H_avg,G_avg_prime,H_avg_prime,J_prime,J_second,"
         "H_lower_bound\n";
  for (int i = 0; i < cfg.grid_n; ++i) {
    const double th =
        cfg.grid_lo + (cfg.grid_hi - cfg.grid_lo) * i / (cfg.grid_n - 1);
    out << fmt17(th) << "," << fmt17(avg_gradient(map, th, cfg.a, quad)) << ","
        << fmt17(avg_hessian(map, th, cfg.a, quad)) << ","
        << fmt17(avg_gradient_deriv(map, th, cfg.a, quad)) << ","
        << fmt17(avg_hessian_deriv(map, th, cfg.a, quad)) << ","
        << fmt17(map.grad(th)) << "," << fmt17(map.hess(th)) << ","
        << fmt17(hessian_lower_bound(map, th, cfg.a)) << "\n";
  }
  std::cout << "wrote " << path << std::endl;
  return 0;
}

int cmd_equilibrium(const RunConfig& cfg) {
  const auto map = builtin_map(cfg.map);
  const QuadratureSpec quad;
  const auto eq = find_equilibrium(map, cfg.a, cfg.tol, quad);
  json j;
  j["map"] = cfg.map;
  j["a"] = cfg.a;
  j["theta_bar_star"] = eq.theta_bar_star;
  j["gamma_star"] = eq.gamma_star;
  j["residual"] = eq.residual;
  j["bracket"] = {eq.bracket_lo, eq.bracket_hi};
  j["iterations"] = eq.iterations;
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_linearize(const RunConfig& cfg) {
  const auto map = builtin_map(cfg.map);
  const QuadratureSpec quad;
  const auto [e1, e2] = linearize(map, params_from(cfg), cfg.a, quad);
  json j;
  j["map"] = cfg.map;
  j["eig_theta"] = e1;
  j["eig_gamma"] = e2;
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_lyapunov_grid(const RunConfig& cfg) {
  const auto map = builtin_map(cfg.map);
  const QuadratureSpec quad;
  const auto p = params_from(cfg);
  const auto eq = find_equilibrium(map, cfg.a, 1e-12, quad);
  const double beta = compute_beta();
  const double span = std::max(std::fabs(cfg.grid_lo), std::fabs(cfg.grid_hi));
  const auto rep = lyapunov_grid(map, p, eq.theta_bar_star, beta, quad,
                                 cfg.grid_n, cfg.grid_n, span, span);
  json j;
  j["map"] = cfg.map;
  j["beta"] = rep.beta_used;
  j["grid_n"] = rep.n_theta;
  j["span"] = span;
  j["exclusion_radius"] = rep.exclusion_radius;
  j["min_V_off_origin"] = rep.min_v_off_origin;
  j["max_Vdot_off_origin"] = rep.max_vdot_off_origin;
  j["pass"] = rep.pass();
  j["violations"] = json::array();
  for (const auto& v : rep.violations)
    j["violations"].push_back(
        {{"theta_err", v.theta_err}, {"gamma_err", v.gamma_err},
         {"value", v.value}, {"kind", v.kind}});
  std::cout << j.dump(2) << std::endl;
  return rep.pass() ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg) {
  const auto map = builtin_map(cfg.map);
  const auto p = params_from(cfg);
  std::vector<double> omegas = cfg.omega_grid;
  if (omegas.empty()) omegas = {5.0, 10.0, 20.0, 40.0};
  std::vector<State2> ics;
  for (const auto& ic : cfg.initial_states) {
    if (ic.size() != 2)
      throw std::invalid_argument("sweep initial states must be 2-dimensional");
    ics.emplace_back(ic[0], ic[1]);
  }
  if (ics.empty()) ics = {State2(1.0, 5.0 / 6.0), State2(1.0, 5.0 / 3.0)};

  const auto rep = practical_stability_sweep(map, p, omegas, ics, cfg.horizon,
                                             cfg.target_radius);
  fs::create_directories(cfg.out_dir);
  const std::string path = (fs::path(cfg.out_dir) / "sweep.csv").string();
  std::ofstream out(path);
  out << "omega,ic_index,tail_radius,entry_time,fit_M,fit_lambda\n";
  for (const auto& r : rep.runs)
    out << fmt17(r.omega) << "," << r.ic_index << "," << fmt17(r.tail_radius)
        << "," << fmt17(r.entry_time) << "," << fmt17(r.fit_M) << ","
        << fmt17(r.fit_lambda) << "\n";
  json j;
  j["file"] = path;
  j["radius_per_omega"] = rep.radius_per_omega;
  j["monotone_radius"] = rep.monotone_radius;
  bool any_exit = false;
  for (const auto& r : rep.runs) any_exit |= r.domain_exit;
  j["any_domain_exit"] = any_exit;
  std::cout << j.dump(2) << std::endl;
  return any_exit ? 2 : 0;
}

int cmd_verify(const RunConfig& cfg) {
  const auto map = builtin_map(cfg.map);
  const auto p = params_from(cfg);
  const QuadratureSpec quad;
  json props = json::array();
  bool all_pass = true;

  auto add = [&](const std::string& name, bool pass, json worst_point,
                 double worst_value) {
    props.push_back({{"name", name},
                     {"pass", pass},
                     {"worst_point", worst_point},
                     {"worst_value", worst_value}});
    all_pass &= pass;
  };

  auto grid_theta = [&](int i) {
    return cfg.grid_lo + (cfg.grid_hi - cfg.grid_lo) * i / (cfg.grid_n - 1);
  };

  {  // strict convexity on the grid interval
    const auto rep = check_strict_convexity(map, cfg.grid_lo, cfg.grid_hi, 50);
    add("strict_convexity", rep.strictly_convex_on_grid, json(),
        rep.min_hessian_integral);
  }
  {  // averaged gradient strictly increasing, derivative positive
    bool pass = true;
    double worst = std::numeric_limits<double>::infinity();
    json wp;
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.grid_n; ++i) {
      const double th = grid_theta(i);
      const double g = avg_gradient(map, th, cfg.a, quad);
      const double gp = avg_gradient_deriv(map, th, cfg.a, quad);
      if (g <= prev || gp <= 0.0) pass = false;
      if (gp < worst) {
        worst = gp;
        wp = {{"theta", th}};
      }
      prev = g;
    }
    add("avg_gradient_monotone", pass, wp, worst);
  }
  {  // averaged Hessian strictly positive
    bool pass = true;
    double worst = std::numeric_limits<double>::infinity();
    json wp;
    for (int i = 0; i < cfg.grid_n; ++i) {
      const double th = grid_theta(i);
      const double h = avg_hessian(map, th, cfg.a, quad);
      if (h <= 0.0) pass = false;
      if (h < worst) {
        worst = h;
        wp = {{"theta", th}};
      }
    }
    add("avg_hessian_positive", pass, wp, worst);
  }
  {  // sandwich bounds
    bool pass = true;
    double worst = std::numeric_limits<double>::infinity();
    json wp;
    for (int i = 0; i < cfg.grid_n; ++i) {
      const double th = grid_theta(i);
      const double g = avg_gradient(map, th, cfg.a, quad);
      const auto [lo, hi] = gradient_bounds(map, th, cfg.a);
      const double margin = std::min(g - lo, hi - g);
      if (margin <= 0.0) pass = false;
      if (margin < worst) {
        worst = margin;
        wp = {{"theta", th}};
      }
    }
    add("gradient_sandwich", pass, wp, worst);
  }
  {  // closed-form lower bound under the averaged Hessian
    bool pass = true;
    double worst = std::numeric_limits<double>::infinity();
    json wp;
    for (int i = 0; i < cfg.grid_n; ++i) {
      const double th = grid_theta(i);
      const double b = hessian_lower_bound(map, th, cfg.a);
      const double margin = avg_hessian(map, th, cfg.a, quad) - b;
      if (b <= 0.0 || margin <= 0.0) pass = false;
      if (margin < worst) {
        worst = margin;
        wp = {{"theta", th}};
      }
    }
    add("hessian_lower_bound", pass, wp, worst);
  }
  {  // linearization eigenvalues strictly negative
    const auto [e1, e2] = linearize(map, p, cfg.a, quad);
    add("linearization_negative", e1 < 0.0 && e2 < 0.0,
        {{"eig_theta", e1}, {"eig_gamma", e2}}, std::max(e1, e2));
  }
  {  // period-averaged full NESC RHS equals the averaged RHS
    bool pass = true;
    double worst = 0.0;
    json wp;
    const int n_t = 4096;
    for (const auto& frozen :
         {State2(0.3, 0.8), State2(-0.6, 1.5), State2(1.0, 5.0 / 6.0),
          State2(-1.5, 2.0), State2(0.05, 0.4)}) {
      State2 acc = State2::Zero();
      const double T = p.dither.period();
      for (int s = 0; s < n_t; ++s)
        acc += nesc_rhs(map, p, s * T / n_t, NescState{frozen[0], frozen[1]});
      acc /= double(n_t);
      const double diff = (acc - nesc_avg_rhs(map, p, quad, frozen)).norm();
      if (diff > 1e-8) pass = false;
      if (diff > worst) {
        worst = diff;
        wp = {{"theta", frozen[0]}, {"Gamma", frozen[1]}};
      }
    }
    add("averaging_consistency", pass, wp, worst);
  }
  {  // Lyapunov certificate on the grid
    const auto eq = find_equilibrium(map, cfg.a, 1e-12, quad);
    const double beta = compute_beta();
    const double span =
        std::max(std::fabs(cfg.grid_lo), std::fabs(cfg.grid_hi));
    const auto rep = lyapunov_grid(map, p, eq.theta_bar_star, beta, quad,
                                   cfg.grid_n, cfg.grid_n, span, span);
    json wp;
    if (!rep.violations.empty())
      wp = {{"theta_err", rep.violations[0].theta_err},
            {"gamma_err", rep.violations[0].gamma_err}};
    add("lyapunov_certificate", rep.pass(), wp, rep.max_vdot_off_origin);
  }

  json j;
  j["map"] = cfg.map;
  j["a"] = cfg.a;
  j["properties"] = props;
  j["all_pass"] = all_pass;
  std::cout << j.dump(2) << std::endl;
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scalar extremum seeking control laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  RunConfig cfg;

  // flags shared by all subcommands; CLI values override config fields
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--map", cfg.map, "map name");
    sub->add_option("--coord", cfg.coord, "coordinate system");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--a", cfg.a, "dither amplitude");
    sub->add_option("--omega", cfg.omega, "dither frequency (rad/s)");
    sub->add_option("--k", cfg.k, "gradient gain");
    sub->add_option("--omega-l", cfg.omega_l, "Riccati filter gain");
    sub->add_option("--dt", cfg.dt, "integration step (0 = auto)");
    sub->add_option("--t-final", cfg.t_final, "integration horizon");
    sub->add_option("--record-every", cfg.record_every, "recording decimation");
    sub->add_option("--grid-lo", cfg.grid_lo, "grid lower bound");
    sub->add_option("--grid-hi", cfg.grid_hi, "grid upper bound");
    sub->add_option("--grid-n", cfg.grid_n, "grid point count");
    sub->add_option("--tol", cfg.tol, "solver tolerance");
    sub->add_option("--horizon", cfg.horizon, "sweep horizon");
    sub->add_option("--target-radius", cfg.target_radius,
                    "sweep target ball radius");
    return sub;
  };

  auto* sim = add_common(app.add_subcommand("simulate", "integrate a system"));
  auto* avg = add_common(
      app.add_subcommand("average-table", "tabulate averaged estimates"));
  auto* eq = add_common(
      app.add_subcommand("equilibrium", "solve for the averaged equilibrium"));
  auto* ver =
      add_common(app.add_subcommand("verify", "run the property suite"));
  auto* lyap = add_common(
      app.add_subcommand("lyapunov-grid", "evaluate the Lyapunov certificate"));
  auto* lin = add_common(
      app.add_subcommand("linearize", "averaged error-system eigenvalues"));
  auto* swp = add_common(
      app.add_subcommand("sweep", "practical-stability sweep over omega"));

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) {
      // config provides the base; explicitly passed flags win
      RunConfig base = RunConfig::load(config_path);
      std::swap(cfg, base);
      auto keep = [&](const std::string& flag, auto member) {
        if (active->count(flag) > 0) cfg.*member = base.*member;
      };
      keep("--map", &RunConfig::map);
      keep("--coord", &RunConfig::coord);
      keep("--out", &RunConfig::out_dir);
      keep("--a", &RunConfig::a);
      keep("--omega", &RunConfig::omega);
      keep("--k", &RunConfig::k);
      keep("--omega-l", &RunConfig::omega_l);
      keep("--dt", &RunConfig::dt);
      keep("--t-final", &RunConfig::t_final);
      keep("--record-every", &RunConfig::record_every);
      keep("--grid-lo", &RunConfig::grid_lo);
      keep("--grid-hi", &RunConfig::grid_hi);
      keep("--grid-n", &RunConfig::grid_n);
      keep("--tol", &RunConfig::tol);
      keep("--horizon", &RunConfig::horizon);
      keep("--target-radius", &RunConfig::target_radius);
    }

    if (active == sim) return cmd_simulate(cfg);
    if (active == avg) return cmd_average_table(cfg);
    if (active == eq) return cmd_equilibrium(cfg);
    if (active == ver) return cmd_verify(cfg);
    if (active == lyap) return cmd_lyapunov_grid(cfg);
    if (active == lin) return cmd_linearize(cfg);
    if (active == swp) return cmd_sweep(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
