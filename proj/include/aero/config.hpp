#pragma once

// Run configuration shared by every CLI command. Files are JSON objects;
// every key is optional, unknown keys are rejected. Angles are given in
// degrees, everything else in SI units.

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aero/bench/runner.hpp"
#include "aero/bench/scenario.hpp"
#include "aero/mpc.hpp"
#include "aero/plant.hpp"
#include "aero/ppo/env.hpp"
#include "aero/ppo/ppo.hpp"
#include "aero/sysid.hpp"

namespace aero {

struct LqiSettings {
  std::array<double, 3> q{10.0, 1.0, 100.0};  // diagonal of Q
  double r = 0.001;
  double period = 0.002;
  double filter_tau = 0.02;
};

struct RunConfig {
  PlantConfig plant;
  std::string controller = "lqi";                          // simulate
  std::vector<std::string> controllers{"lqi", "mpc", "ppo"};  // compare
  std::string scenario = "sequence";                        // "sequence" or "step:<deg>"
  std::vector<double> targets = standard_step_targets();   // compare, deg
  LqiSettings lqi;
  mpc::MpcConfig mpc;
  ppo::PpoConfig ppo;
  double ppo_control_period = 0.1;
  int ppo_episode_steps = 800;
  bool ppo_randomize_targets = false;
  std::string checkpoint;  // PPO policy for simulate/evaluate/compare
  sysid::SequenceOptions sequence;
  sysid::FitOptions fit;
  std::uint64_t seed = 0;
  std::filesystem::path out = "out";
  bool parallel = true;

  void validate() const;
  ppo::EnvConfig env() const;
};

/// Throws ConfigError on malformed JSON, wrong types or unknown keys.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// "sequence" or "step:<deg>".
bench::Scenario make_scenario(const std::string& spec);

/// Builds a fresh controller per call. "lqi" and "mpc" are synthesized from
/// the configured plant's linearization at the origin; "ppo" loads
/// cfg.checkpoint; "zero" always outputs 0 V. Throws ConfigError for an
/// unknown name.
bench::ControllerFactory controller_factory(const RunConfig& cfg, const std::string& name);

}  // namespace aero
