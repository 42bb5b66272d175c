#include "aero/ppo/gae.hpp"

#include <cmath>

#include "aero/numerics/matrix.hpp"

namespace aero::ppo {

GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const bool> dones, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  num::require_shape(values.size() == n + 1, "GAE values need a bootstrap entry");
  num::require_shape(dones.size() == n, "GAE dones");
  GaeResult out{std::vector<double>(n), std::vector<double>(n)};
  double next_adv = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double live = dones[t] ? 0.0 : 1.0;
    const double delta = rewards[t] + gamma * values[t + 1] * live - values[t];
    next_adv = delta + gamma * lambda * live * next_adv;
    out.advantages[t] = next_adv;
    out.returns[t] = next_adv + values[t];
  }
  return out;
}

void normalize(std::span<double> x) {
  if (x.empty()) return;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(x.size()));
  for (auto& v : x) v = (v - mean) / (sd + 1e-8);
}

}  // namespace aero::ppo
