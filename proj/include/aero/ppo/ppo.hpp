#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "aero/kernels.hpp"
#include "aero/ppo/actor_critic.hpp"
#include "aero/ppo/env.hpp"

namespace aero::ppo {

/// Defaults are the stock PPO settings (no tuning).
struct PpoConfig {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_range = 0.2;
  double learning_rate = 3e-4;
  int n_steps = 2048;
  int batch_size = 64;
  int n_epochs = 10;
  double vf_coef = 0.5;
  double ent_coef = 0.0;
  double max_grad_norm = 0.5;
  double adam_eps = 1e-5;
  double log_std_init = 0.0;
  long total_steps = 1'000'000;
  long eval_interval = 10'240;
  kernels::Backend backend = kernels::Backend::serial;

  void validate() const;
};

struct Transition {
  Observation obs;
  double action;    // raw (unclipped) sample
  double log_prob;
  double reward;
  double value;
  bool done;
};

struct Trajectory {
  std::vector<Transition> steps;
  double bootstrap_value = 0.0;  // V(s) after the last step
};

/// Flattened rollout ready for minibatch updates.
struct Batch {
  std::vector<double> obs;  // size x 3
  std::vector<double> actions;
  std::vector<double> old_log_probs;
  std::vector<double> advantages;  // normalized over the batch
  std::vector<double> returns;

  std::size_t size() const { return actions.size(); }
};

Batch make_batch(const Trajectory& traj, const PpoConfig& cfg);

struct LossStats {
  double loss = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
};

/// Clipped-surrogate loss on the minibatch `indices` and its gradient with
/// respect to ac.params() (written into `grad`, which is overwritten):
///
///   L = −mean(min(ρA, clip(ρ, 1−ε, 1+ε)A)) + c_v mean((V − R)²) − c_e H
LossStats ppo_loss_gradient(const ActorCritic& ac, const Batch& batch,
                            std::span<const std::size_t> indices, const PpoConfig& cfg,
                            std::span<double> grad);

class Adam {
 public:
  Adam(std::size_t n, double lr, double eps = 1e-8, double beta1 = 0.9,
       double beta2 = 0.999);
  void step(std::span<double> params, std::span<const double> grad);

 private:
  double lr_, eps_, beta1_, beta2_;
  std::vector<double> m_, v_;
  long t_ = 0;
};

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  int minibatches = 0;
  bool aborted = false;  // a non-finite loss stopped the update
};

/// n_epochs passes over shuffled minibatches with Adam and global gradient
/// norm clipping.
UpdateStats ppo_update(ActorCritic& ac, const Batch& batch, const PpoConfig& cfg,
                       Adam& optimizer, std::mt19937_64& rng);

struct CurvePoint {
  long step;
  double eval_reward;
  double mean_deviation_deg;
};

struct TrainResult {
  ActorCritic best;
  double best_reward = 0.0;
  long best_step = 0;
  ActorCritic last;
  long steps = 0;
  std::vector<CurvePoint> curve;
  int aborted_updates = 0;
};

/// Rollout/update loop on PitchEnv until cfg.total_steps environment steps.
/// Every eval_interval steps the mean policy is scored on the fixed 80 s
/// sequence; the best-scoring parameters are kept. Deterministic per seed.
TrainResult train(const EnvConfig& env_cfg, const PpoConfig& cfg, std::uint64_t seed,
                  const std::function<void(const CurvePoint&)>& on_eval = {});

}  // namespace aero::ppo
