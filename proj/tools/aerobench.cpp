// Command-line front end: simulate, identify, synthesize, train, evaluate,
// compare. Exit codes: 0 ok, 1 domain error, 2 usage/config error.

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aero/bench/metrics.hpp"
#include "aero/bench/report.hpp"
#include "aero/bench/runner.hpp"
#include "aero/config.hpp"
#include "aero/errors.hpp"
#include "aero/io/format.hpp"
#include "aero/lqi.hpp"
#include "aero/model.hpp"
#include "aero/mpc.hpp"
#include "aero/numerics/linalg.hpp"
#include "aero/numerics/riccati.hpp"
#include "aero/ppo/checkpoint.hpp"
#include "aero/ppo/env.hpp"
#include "aero/ppo/policy_controller.hpp"
#include "aero/ppo/ppo.hpp"
#include "aero/sysid.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace aero;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> checkpoint;
};

RunConfig load(const Common& c) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : load_run_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.out) cfg.out = *c.out;
  if (c.checkpoint) cfg.checkpoint = *c.checkpoint;
  return cfg;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

std::vector<double> to_vec(const num::Vector& v) {
  return std::vector<double>(v.span().begin(), v.span().end());
}

std::vector<std::vector<double>> to_rows(const num::Matrix& m) {
  std::vector<std::vector<double>> rows(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) rows[i].push_back(m(i, j));
  return rows;
}

json eig_json(const num::Matrix& a) {
  json arr = json::array();
  for (const auto& z : num::eigenvalues(a)) arr.push_back({z.real(), z.imag()});
  return arr;
}

void print_step(const bench::StepMetrics& m) {
  std::printf("e_inf %s deg, M_p %s %%, t_r %s s\n", io::format_sig(m.e_inf).c_str(),
              io::format_sig(m.m_p).c_str(), io::format_sig(m.t_r).c_str());
}

int cmd_simulate(const Common& common, const std::optional<std::string>& controller,
                 const std::optional<std::string>& scenario_spec) {
  RunConfig cfg = load(common);
  if (controller) cfg.controller = *controller;
  if (scenario_spec) cfg.scenario = *scenario_spec;
  const bench::Scenario scenario = make_scenario(cfg.scenario);
  auto make = controller_factory(cfg, cfg.controller);
  ControllerPtr c = make();

  fs::create_directories(cfg.out / "traces");
  const fs::path trace_path = cfg.out / "traces" / (cfg.controller + "_" + scenario.name + ".csv");
  auto dump = [&](const bench::TimeSeries& tr) {
    std::ofstream os(trace_path);
    bench::write_trace_csv(os, tr);
  };
  bench::RunResult res;
  try {
    res = bench::run_scenario(*c, scenario, cfg.plant, cfg.seed);
  } catch (const bench::ScenarioFault& e) {
    dump(e.partial_trace());
    throw;
  }
  dump(res.trace);

  std::printf("%s on %s: %zu samples -> %s\n", cfg.controller.c_str(), scenario.name.c_str(),
              res.trace.size(), trace_path.string().c_str());
  if (scenario.kind == bench::ScenarioKind::step) {
    bench::MetricOptions mo;
    mo.step_time = scenario.step_time;
    print_step(bench::step_metrics(res.trace, scenario.step_target_deg, mo));
  } else {
    std::printf("mean |Delta| %s deg\n", io::format_sig(bench::sequence_deviation(res.trace)).c_str());
  }
  std::printf("safety events %d, QP failures %d, control time %s us/step\n",
              res.stats.safety_events, res.stats.qp_failures,
              io::format_sig(res.stats.mean_control_us).c_str());
  return 0;
}

int cmd_identify(const Common& common, const std::optional<std::string>& data_path,
                 const std::vector<double>& init) {
  const RunConfig cfg = load(common);
  fs::create_directories(cfg.out);
  sysid::IdentDataset data;
  PlantParams guess = cfg.plant.params;
  if (data_path) {
    data = sysid::load_csv(*data_path);
  } else {
    data = sysid::generate_test_sequence(cfg.plant.params, cfg.seed, cfg.sequence);
    sysid::save_csv(cfg.out / "ident_data.csv", data);
    // Start away from the generating values so the fit has work to do.
    guess.c_theta *= 1.2;
    guess.c_omega *= 0.8;
    guess.c_u *= 1.2;
  }
  if (!init.empty()) {
    if (init.size() != 3) throw ConfigError("--init takes c_theta c_omega c_u");
    guess.c_theta = init[0];
    guess.c_omega = init[1];
    guess.c_u = init[2];
  }
  sysid::FitOptions fo = cfg.fit;
  fo.seed = cfg.seed;
  fo.parallel = cfg.parallel;
  const auto r = sysid::fit(data, guess, fo);

  const json j = {{"c_theta", r.params.c_theta}, {"c_omega", r.params.c_omega},
                  {"c_u", r.params.c_u},         {"cost", r.cost},
                  {"initial_cost", r.initial_cost}, {"evaluations", r.evaluations},
                  {"start_costs", r.start_costs},   {"samples", data.size()}};
  write_json(cfg.out / "fitted_params.json", j);
  std::printf("c_theta %s  c_omega %s  c_u %s  (cost %s, from %s)\n",
              io::format_sig(r.params.c_theta).c_str(), io::format_sig(r.params.c_omega).c_str(),
              io::format_sig(r.params.c_u).c_str(), io::format_sig(r.cost).c_str(),
              io::format_sig(r.initial_cost).c_str());
  return 0;
}

int cmd_synthesize(const Common& common) {
  const RunConfig cfg = load(common);
  fs::create_directories(cfg.out);
  const LinearModel model = linearize(cfg.plant.params);

  const num::Matrix q = num::Matrix::diagonal({cfg.lqi.q[0], cfg.lqi.q[1], cfg.lqi.q[2]});
  const num::Matrix a_aug = lqi::augmented_a(model);
  const num::Matrix b_aug = num::Matrix::column(lqi::augmented_b(model));
  const auto care = num::solve_care(a_aug, b_aug, q, num::Matrix{{cfg.lqi.r}});
  const num::Matrix lqi_cl = a_aug - b_aug * care.k;

  const mpc::MpcProblem problem(discretize(model, cfg.mpc.ts), cfg.mpc);
  const auto& dm = problem.model();
  const num::Matrix dare_cl = dm.ad - num::Matrix::column(dm.bd) * problem.terminal_gain();
  const auto& aug = problem.augmented();
  const num::Matrix obs_cl = aug.a - num::outer(problem.observer_gain(), aug.c);

  const json j = {
      {"lqi",
       {{"k", to_rows(care.k)[0]},
        {"period", cfg.lqi.period},
        {"care_residual", care.residual},
        {"closed_loop_eigenvalues", eig_json(lqi_cl)}}},
      {"mpc",
       {{"ad", to_rows(dm.ad)},
        {"bd", to_vec(dm.bd)},
        {"terminal_cost", to_rows(problem.terminal_cost())},
        {"terminal_gain", to_rows(problem.terminal_gain())[0]},
        {"dare_residual", problem.dare_residual()},
        {"dare_closed_loop_eigenvalues", eig_json(dare_cl)},
        {"observer_gain", to_vec(problem.observer_gain())},
        {"observer_eigenvalues", eig_json(obs_cl)},
        {"prediction_time", cfg.mpc.prediction_time()}}}};
  write_json(cfg.out / "gains.json", j);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_train(const Common& common, const std::optional<long>& steps, bool quiet) {
  RunConfig cfg = load(common);
  if (steps) cfg.ppo.total_steps = *steps;
  cfg.validate();
  fs::create_directories(cfg.out);
  const auto result = ppo::train(cfg.env(), cfg.ppo, cfg.seed, [&](const ppo::CurvePoint& p) {
    if (!quiet)
      std::fprintf(stderr, "step %8ld  eval reward %10s  mean deviation %s deg\n", p.step,
                   io::format_sig(p.eval_reward).c_str(),
                   io::format_sig(p.mean_deviation_deg).c_str());
  });
  ppo::save_checkpoint(cfg.out / "checkpoint.txt", result.best);
  ppo::save_checkpoint(cfg.out / "checkpoint_last.txt", result.last);
  {
    std::ofstream os(cfg.out / "learning_curve.csv");
    ppo::write_learning_curve(os, result.curve);
  }
  std::printf("best eval reward %s at step %ld (mean deviation %s deg); %ld steps, %d aborted updates\n",
              io::format_sig(result.best_reward).c_str(), result.best_step,
              io::format_sig(ppo::reward_to_mean_deviation_deg(result.best_reward, cfg.ppo_episode_steps)).c_str(),
              result.steps, result.aborted_updates);
  return 0;
}

int cmd_evaluate(const Common& common) {
  const RunConfig cfg = load(common);
  if (cfg.checkpoint.empty()) throw ConfigError("evaluate needs --checkpoint");
  const ppo::ActorCritic ac = ppo::load_checkpoint(cfg.checkpoint);
  const double reward = ppo::evaluate_policy(ac, cfg.env());

  ppo::PolicyController c(ac, cfg.ppo_control_period, cfg.plant.params.u_limit);
  const auto res = bench::run_scenario(c, bench::sequence_scenario(), cfg.plant, cfg.seed);
  fs::create_directories(cfg.out / "traces");
  {
    std::ofstream os(cfg.out / "traces" / "ppo_sequence.csv");
    bench::write_trace_csv(os, res.trace);
  }
  std::printf("eval reward %s (mean deviation %s deg); benchmark mean |Delta| %s deg\n",
              io::format_sig(reward).c_str(),
              io::format_sig(ppo::reward_to_mean_deviation_deg(reward, cfg.ppo_episode_steps)).c_str(),
              io::format_sig(bench::sequence_deviation(res.trace)).c_str());
  return 0;
}

int cmd_compare(const Common& common, const std::vector<std::string>& names) {
  RunConfig cfg = load(common);
  if (!names.empty()) cfg.controllers = names;
  std::vector<bench::NamedController> controllers;
  for (const auto& n : cfg.controllers) controllers.push_back({n, controller_factory(cfg, n)});
  bench::CompareOptions opt;
  opt.targets = cfg.targets;
  opt.parallel = cfg.parallel;
  opt.out_dir = cfg.out;
  const auto res = bench::compare(controllers, cfg.plant, cfg.seed, opt);
  bench::write_markdown(std::cout, res.report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pitch-control benchmark workbench"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "Random seed (overrides the config)");
    sub->add_option("--out", common.out, "Output directory (overrides the config)");
  };

  std::optional<std::string> controller, scenario, data;
  std::vector<double> init;
  std::optional<long> steps;
  std::vector<std::string> names;
  bool quiet = false;

  auto* sim = app.add_subcommand("simulate", "Run one controller on one scenario");
  add_common(sim);
  sim->add_option("--controller", controller, "lqi, mpc, ppo or zero");
  sim->add_option("--scenario", scenario, "'sequence' or 'step:<deg>'");
  sim->add_option("--checkpoint", common.checkpoint, "PPO checkpoint");

  auto* ident = app.add_subcommand("identify", "Fit plant coefficients to a t,u,theta,omega CSV");
  add_common(ident);
  ident->add_option("--data", data, "Dataset CSV; a synthetic one is generated when omitted");
  ident->add_option("--init", init, "Initial c_theta c_omega c_u")->expected(3);

  auto* synth = app.add_subcommand("synthesize", "Compute LQI and MPC gains");
  add_common(synth);

  auto* train = app.add_subcommand("train", "Train a PPO policy on the simulated plant");
  add_common(train);
  train->add_option("--steps", steps, "Environment steps (overrides the config)");
  train->add_flag("--quiet", quiet, "No progress output");

  auto* eval = app.add_subcommand("evaluate", "Score a PPO checkpoint on the 80 s sequence");
  add_common(eval);
  eval->add_option("--checkpoint", common.checkpoint, "PPO checkpoint");

  auto* cmp = app.add_subcommand("compare", "Run the full comparison and write the report");
  add_common(cmp);
  cmp->add_option("--controllers", names, "Controllers to compare")->delimiter(',');
  cmp->add_option("--checkpoint", common.checkpoint, "PPO checkpoint");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(common, controller, scenario);
    if (ident->parsed()) return cmd_identify(common, data, init);
    if (synth->parsed()) return cmd_synthesize(common);
    if (train->parsed()) return cmd_train(common, steps, quiet);
    if (eval->parsed()) return cmd_evaluate(common);
    if (cmp->parsed()) return cmd_compare(common, names);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
