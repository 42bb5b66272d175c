#include "aero/ppo/actor_critic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aero::ppo {

ActorCritic::ActorCritic()
    : policy_({3, kHidden, kHidden, 1}),
      value_({3, kHidden, kHidden, 1}),
      params_(policy_.num_params() + 1 + value_.num_params(), 0.0) {}

ActorCritic::ActorCritic(std::mt19937_64& rng, double log_std_init) : ActorCritic() {
  auto p = std::span<double>(params_);
  policy_.init_orthogonal(p.subspan(policy_offset(), policy_.num_params()), rng,
                          std::numbers::sqrt2, 0.01);
  value_.init_orthogonal(p.subspan(value_offset(), value_.num_params()), rng,
                         std::numbers::sqrt2, 1.0);
  params_[log_std_index()] = log_std_init;
}

std::span<const double> ActorCritic::policy_params() const {
  return std::span<const double>(params_).subspan(policy_offset(), policy_.num_params());
}

std::span<const double> ActorCritic::value_params() const {
  return std::span<const double>(params_).subspan(value_offset(), value_.num_params());
}

double ActorCritic::mean(const Observation& obs) const {
  const auto x = obs.as_array();
  return policy_.evaluate(policy_params(), x);
}

double ActorCritic::value(const Observation& obs) const {
  const auto x = obs.as_array();
  return value_.evaluate(value_params(), x);
}

double gaussian_log_prob(double x, double mean, double log_std) {
  const double z = (x - mean) * std::exp(-log_std);
  return -0.5 * z * z - log_std - 0.5 * std::log(2.0 * std::numbers::pi);
}

ActionSample sample_action(const ActorCritic& ac, const Observation& obs,
                           std::mt19937_64& rng, double u_limit) {
  const double mu = ac.mean(obs);
  const double sigma = std::exp(ac.log_std());
  std::normal_distribution<double> normal(0.0, 1.0);
  const double raw = mu + sigma * normal(rng);
  return {raw, std::clamp(raw, -u_limit, u_limit), gaussian_log_prob(raw, mu, ac.log_std())};
}

double deterministic_action(const ActorCritic& ac, const Observation& obs, double u_limit) {
  return std::clamp(ac.mean(obs), -u_limit, u_limit);
}

}  // namespace aero::ppo
