#include "aero/ppo/env.hpp"

#include <cmath>

#include "aero/errors.hpp"
#include "aero/units.hpp"

namespace aero::ppo {

void EnvConfig::validate() const {
  plant.validate();
  if (!(control_period > 0.0)) throw ConfigError("env: control_period must be positive");
  if (episode_steps < 1) throw ConfigError("env: episode_steps must be positive");
  const double ratio = control_period / plant.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9)
    throw ConfigError("env: control_period must be a multiple of the plant dt");
}

PitchEnv::PitchEnv(EnvConfig config, std::uint64_t seed)
    : config_(std::move(config)), sim_(config_.plant, seed), rng_(seed ^ 0x9e3779b97f4a7c15ULL) {
  config_.validate();
  ticks_per_step_ = static_cast<int>(std::lround(config_.control_period / config_.plant.dt));
  profile_ = tracking_sequence();
}

Observation PitchEnv::observe(double measured) {
  const double r = profile_.at_rad(time());
  Observation obs{measured - r, measured - prev_measured_, measured};
  prev_measured_ = measured;
  return obs;
}

Observation PitchEnv::reset() {
  if (config_.randomize_targets) {
    std::uniform_real_distribution<double> target(-40.0, 40.0);
    ReferenceProfile p;
    const double duration = config_.episode_steps * config_.control_period;
    for (double t = 0.0; t < duration; t += 10.0) p.segments.push_back({t, target(rng_)});
    profile_ = std::move(p);
  }
  sim_.reset();
  steps_ = 0;
  const double y = sim_.measure();
  prev_measured_ = y;
  return observe(y);
}

EnvStep PitchEnv::step(double u) {
  double applied = 0.0;
  for (int i = 0; i < ticks_per_step_; ++i) applied = sim_.tick(u);
  ++steps_;
  const double r = profile_.at_rad(time());
  const double reward = -std::abs(sim_.state().theta - r);
  const Observation obs = observe(sim_.measure());
  return {obs, reward, steps_ >= config_.episode_steps, applied};
}

double evaluate_policy(const ActorCritic& ac, const EnvConfig& config) {
  EnvConfig cfg = config;
  cfg.randomize_targets = false;
  PitchEnv env(cfg, 0);
  Observation obs = env.reset();
  double total = 0.0;
  for (;;) {
    const EnvStep s = env.step(deterministic_action(ac, obs, cfg.plant.params.u_limit));
    total += s.reward;
    obs = s.obs;
    if (s.done) break;
  }
  return total;
}

double reward_to_mean_deviation_deg(double cumulative_reward, int steps) {
  return rad_to_deg(std::abs(cumulative_reward) / steps);
}

}  // namespace aero::ppo
