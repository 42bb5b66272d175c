#pragma once

#include <cstdint>
#include <random>

#include "aero/plant.hpp"
#include "aero/ppo/actor_critic.hpp"
#include "aero/reference.hpp"

namespace aero::ppo {

struct EnvConfig {
  PlantConfig plant;
  double control_period = 0.1;  // s
  int episode_steps = 800;      // 80 s
  /// Draw a fresh target per 10 s segment (uniform in ±40°) instead of the
  /// fixed tracking sequence.
  bool randomize_targets = false;

  void validate() const;
};

struct EnvStep {
  Observation obs;
  double reward;  // −|θ − r| in radians, measured after the action
  bool done;
  double applied_u;
};

/// Episodic pitch-tracking task on the simulated plant. One step holds the
/// action for `control_period`, integrating the plant at its own dt with the
/// safety override active.
class PitchEnv {
 public:
  PitchEnv(EnvConfig config, std::uint64_t seed);

  Observation reset();
  EnvStep step(double u);

  int step_count() const { return steps_; }
  double time() const { return steps_ * config_.control_period; }
  const ReferenceProfile& profile() const { return profile_; }
  const PlantSimulator& plant() const { return sim_; }
  const EnvConfig& config() const { return config_; }

 private:
  Observation observe(double measured);

  EnvConfig config_;
  PlantSimulator sim_;
  std::mt19937_64 rng_;
  ReferenceProfile profile_;
  int ticks_per_step_;
  int steps_ = 0;
  double prev_measured_ = 0.0;
};

/// Deterministic rollout of the mean policy over one episode of the fixed
/// sequence. Returns the cumulative reward.
double evaluate_policy(const ActorCritic& ac, const EnvConfig& config);

/// Cumulative reward over `steps` samples ⇔ mean absolute deviation in
/// degrees: |reward| / steps · 180/π.
double reward_to_mean_deviation_deg(double cumulative_reward, int steps = 800);

}  // namespace aero::ppo
