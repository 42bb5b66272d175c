#include "aero/ppo/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <memory>
#include <numeric>

#include "aero/errors.hpp"
#include "aero/numerics/matrix.hpp"
#include "aero/ppo/gae.hpp"

namespace aero::ppo {

void PpoConfig::validate() const {
  auto fail = [](const char* m) { throw ConfigError(std::string("ppo: ") + m); };
  if (!(gamma > 0.0 && gamma <= 1.0)) fail("gamma must be in (0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) fail("gae_lambda must be in [0, 1]");
  if (!(clip_range > 0.0)) fail("clip_range must be positive");
  if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
  if (n_steps < 1 || batch_size < 1 || n_epochs < 1) fail("n_steps, batch_size, n_epochs must be positive");
  if (batch_size > n_steps) fail("batch_size must not exceed n_steps");
  if (!(max_grad_norm > 0.0)) fail("max_grad_norm must be positive");
  if (total_steps < 1 || eval_interval < 1) fail("total_steps and eval_interval must be positive");
}

Batch make_batch(const Trajectory& traj, const PpoConfig& cfg) {
  const std::size_t n = traj.steps.size();
  std::vector<double> rewards(n), values(n + 1);
  auto dones = std::make_unique<bool[]>(n);
  Batch b;
  b.obs.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = traj.steps[i];
    rewards[i] = s.reward;
    values[i] = s.value;
    dones[i] = s.done;
    const auto o = s.obs.as_array();
    b.obs.insert(b.obs.end(), o.begin(), o.end());
    b.actions.push_back(s.action);
    b.old_log_probs.push_back(s.log_prob);
  }
  values[n] = traj.bootstrap_value;
  auto gae = compute_gae(rewards, values, std::span<const bool>(dones.get(), n), cfg.gamma,
                         cfg.gae_lambda);
  b.returns = std::move(gae.returns);
  b.advantages = std::move(gae.advantages);
  normalize(b.advantages);
  return b;
}

LossStats ppo_loss_gradient(const ActorCritic& ac, const Batch& batch,
                            std::span<const std::size_t> indices, const PpoConfig& cfg,
                            std::span<double> grad) {
  const std::size_t m = indices.size();
  num::require_shape(grad.size() == ac.params().size(), "PPO gradient size");
  std::fill(grad.begin(), grad.end(), 0.0);
  LossStats st;
  if (m == 0) return st;

  std::vector<double> x(3 * m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < 3; ++k) x[3 * j + k] = batch.obs[3 * indices[j] + k];

  Mlp::Cache pc, vc;
  ac.policy_net().forward(ac.policy_params(), x, m, pc, cfg.backend);
  ac.value_net().forward(ac.value_params(), x, m, vc, cfg.backend);
  const auto& mu = pc.acts.back();
  const auto& v = vc.acts.back();

  const double log_std = ac.log_std();
  const double inv_var = std::exp(-2.0 * log_std);
  const double inv_m = 1.0 / static_cast<double>(m);
  std::vector<double> d_mu(m), d_v(m);
  double d_log_std = 0.0;

  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t i = indices[j];
    const double a = batch.actions[i];
    const double adv = batch.advantages[i];
    const double logp = gaussian_log_prob(a, mu[j], log_std);
    const double log_ratio = logp - batch.old_log_probs[i];
    const double ratio = std::exp(log_ratio);
    const double clipped = std::clamp(ratio, 1.0 - cfg.clip_range, 1.0 + cfg.clip_range);
    const double surr1 = ratio * adv;
    const double surr2 = clipped * adv;
    st.policy_loss -= std::min(surr1, surr2) * inv_m;
    st.approx_kl += ((ratio - 1.0) - log_ratio) * inv_m;
    if (std::abs(ratio - 1.0) > cfg.clip_range) st.clip_fraction += inv_m;

    // ∂(−min)/∂logp: the unclipped branch carries ρA, the clipped one is flat.
    const double g_logp = surr1 <= surr2 ? -surr1 * inv_m : 0.0;
    const double diff = a - mu[j];
    d_mu[j] = g_logp * diff * inv_var;
    d_log_std += g_logp * (diff * diff * inv_var - 1.0);

    const double err = v[j] - batch.returns[i];
    st.value_loss += err * err * inv_m;
    d_v[j] = cfg.vf_coef * 2.0 * err * inv_m;
  }
  st.entropy = log_std + 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
  d_log_std -= cfg.ent_coef;
  st.loss = st.policy_loss + cfg.vf_coef * st.value_loss - cfg.ent_coef * st.entropy;

  ac.policy_net().backward(ac.policy_params(), pc, d_mu,
                           grad.subspan(ac.policy_offset(), ac.policy_net().num_params()),
                           cfg.backend);
  grad[ac.log_std_index()] = d_log_std;
  ac.value_net().backward(ac.value_params(), vc, d_v,
                          grad.subspan(ac.value_offset(), ac.value_net().num_params()),
                          cfg.backend);
  return st;
}

Adam::Adam(std::size_t n, double lr, double eps, double beta1, double beta2)
    : lr_(lr), eps_(eps), beta1_(beta1), beta2_(beta2), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad) {
  num::require_shape(params.size() == m_.size() && grad.size() == m_.size(), "Adam sizes");
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  const double step = lr_ / c1;
  const double sqrt_c2 = std::sqrt(c2);
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    params[i] -= step * m_[i] / (std::sqrt(v_[i]) / sqrt_c2 + eps_);
  }
}

UpdateStats ppo_update(ActorCritic& ac, const Batch& batch, const PpoConfig& cfg,
                       Adam& optimizer, std::mt19937_64& rng) {
  UpdateStats st;
  const std::size_t n = batch.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad(ac.params().size());
  const std::size_t mb = static_cast<std::size_t>(cfg.batch_size);

  for (int epoch = 0; epoch < cfg.n_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += mb) {
      const std::size_t len = std::min(mb, n - start);
      const auto idx = std::span<const std::size_t>(order).subspan(start, len);
      const LossStats ls = ppo_loss_gradient(ac, batch, idx, cfg, grad);
      if (!std::isfinite(ls.loss)) {
        st.aborted = true;
        return st;
      }
      double norm = 0.0;
      for (double g : grad) norm += g * g;
      norm = std::sqrt(norm);
      if (norm > cfg.max_grad_norm) {
        const double scale = cfg.max_grad_norm / (norm + 1e-6);
        for (auto& g : grad) g *= scale;
      }
      optimizer.step(ac.params(), grad);

      st.policy_loss += ls.policy_loss;
      st.value_loss += ls.value_loss;
      st.approx_kl += ls.approx_kl;
      st.clip_fraction += ls.clip_fraction;
      ++st.minibatches;
    }
  }
  if (st.minibatches > 0) {
    const double k = 1.0 / st.minibatches;
    st.policy_loss *= k;
    st.value_loss *= k;
    st.approx_kl *= k;
    st.clip_fraction *= k;
  }
  return st;
}

TrainResult train(const EnvConfig& env_cfg, const PpoConfig& cfg, std::uint64_t seed,
                  const std::function<void(const CurvePoint&)>& on_eval) {
  cfg.validate();
  env_cfg.validate();
  std::mt19937_64 rng(seed);
  ActorCritic ac(rng, cfg.log_std_init);
  Adam optimizer(ac.params().size(), cfg.learning_rate, cfg.adam_eps);
  PitchEnv env(env_cfg, seed + 1);
  const double u_limit = env_cfg.plant.params.u_limit;

  TrainResult result;
  auto evaluate = [&](long step) {
    const double reward = evaluate_policy(ac, env_cfg);
    const CurvePoint p{step, reward, reward_to_mean_deviation_deg(reward, env_cfg.episode_steps)};
    result.curve.push_back(p);
    if (result.curve.size() == 1 || reward > result.best_reward) {
      result.best_reward = reward;
      result.best = ac;
      result.best_step = step;
    }
    if (on_eval) on_eval(p);
  };

  evaluate(0);
  long next_eval = cfg.eval_interval;
  long steps = 0;
  Observation obs = env.reset();
  Trajectory traj;
  traj.steps.reserve(static_cast<std::size_t>(cfg.n_steps));

  while (steps < cfg.total_steps) {
    traj.steps.clear();
    for (int i = 0; i < cfg.n_steps; ++i) {
      const ActionSample a = sample_action(ac, obs, rng, u_limit);
      const double value = ac.value(obs);
      const EnvStep s = env.step(a.applied);
      traj.steps.push_back({obs, a.raw, a.log_prob, s.reward, value, s.done});
      obs = s.done ? env.reset() : s.obs;
      ++steps;
    }
    traj.bootstrap_value = ac.value(obs);
    const Batch batch = make_batch(traj, cfg);
    const UpdateStats us = ppo_update(ac, batch, cfg, optimizer, rng);
    if (us.aborted) ++result.aborted_updates;

    if (steps >= next_eval) {
      evaluate(steps);
      while (next_eval <= steps) next_eval += cfg.eval_interval;
    }
  }
  result.last = ac;
  result.steps = steps;
  return result;
}

}  // namespace aero::ppo
