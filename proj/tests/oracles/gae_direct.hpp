#pragma once

// GAE from its definition: A_t = Σ_{l≥0} (γλ)^l δ_{t+l}, truncated at the
// first episode end, with δ_t = g_t + γ V_{t+1}(1 − done_t) − V_t.

#include <vector>

namespace oracle {

inline std::vector<double> gae_direct(const std::vector<double>& rewards,
                                      const std::vector<double>& values,
                                      const std::vector<bool>& dones, double gamma,
                                      double lambda) {
  const std::size_t n = rewards.size();
  std::vector<double> delta(n);
  for (std::size_t t = 0; t < n; ++t)
    delta[t] = rewards[t] + gamma * values[t + 1] * (dones[t] ? 0.0 : 1.0) - values[t];
  std::vector<double> adv(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double weight = 1.0;
    for (std::size_t l = t; l < n; ++l) {
      adv[t] += weight * delta[l];
      if (dones[l]) break;
      weight *= gamma * lambda;
    }
  }
  return adv;
}

}  // namespace oracle
