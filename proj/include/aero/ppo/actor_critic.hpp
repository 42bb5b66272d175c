#pragma once

#include <array>
#include <random>
#include <span>
#include <vector>

#include "aero/ppo/mlp.hpp"

namespace aero::ppo {

/// Agent observation, all in radians: (θ − r, θ_t − θ_{t−1}, θ).
struct Observation {
  double delta = 0.0;
  double pitch_diff = 0.0;
  double theta = 0.0;

  std::array<double, 3> as_array() const { return {delta, pitch_diff, theta}; }
};

/// Gaussian policy head N(mean(s), exp(log_std)²) in volts plus a separate
/// value network. Both are 3→64→64→1 tanh MLPs. Parameters are stored in
/// one flat vector: [policy | log_std | value].
class ActorCritic {
 public:
  static constexpr std::size_t kHidden = 64;

  ActorCritic();
  /// SB3-style init: orthogonal, gain √2 on hidden layers, 0.01 on the
  /// policy output, 1 on the value output, log_std = log_std_init.
  ActorCritic(std::mt19937_64& rng, double log_std_init = 0.0);

  const Mlp& policy_net() const { return policy_; }
  const Mlp& value_net() const { return value_; }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  std::span<const double> policy_params() const;
  std::span<const double> value_params() const;
  double log_std() const { return params_[log_std_index()]; }
  void set_log_std(double v) { params_[log_std_index()] = v; }

  std::size_t policy_offset() const { return 0; }
  std::size_t log_std_index() const { return policy_.num_params(); }
  std::size_t value_offset() const { return policy_.num_params() + 1; }

  double mean(const Observation& obs) const;
  double value(const Observation& obs) const;

 private:
  Mlp policy_;
  Mlp value_;
  std::vector<double> params_;
};

struct ActionSample {
  double raw;       // unclipped Gaussian sample, V
  double applied;   // clipped to ±u_limit
  double log_prob;  // of the raw sample
};

double gaussian_log_prob(double x, double mean, double log_std);

ActionSample sample_action(const ActorCritic& ac, const Observation& obs,
                           std::mt19937_64& rng, double u_limit = 24.0);

/// Deterministic (mean) action, clipped.
double deterministic_action(const ActorCritic& ac, const Observation& obs,
                            double u_limit = 24.0);

}  // namespace aero::ppo
