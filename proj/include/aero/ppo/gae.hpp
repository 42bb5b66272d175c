#pragma once

#include <span>
#include <vector>

namespace aero::ppo {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;  // advantages + values (before normalization)
};

/// Generalized advantage estimation over one rollout.
///
///   δ_t = g_t + γ V_{t+1} (1 − done_t) − V_t
///   A_t = δ_t + γ λ (1 − done_t) A_{t+1}
///
/// `values` has one more entry than `rewards`: the bootstrap value of the
/// state reached after the last step. done_t marks that step t ended an
/// episode. Advantages are returned raw; see normalize().
GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const bool> dones, double gamma, double lambda);

/// In-place (x − mean) / (std + 1e-8).
void normalize(std::span<double> x);

}  // namespace aero::ppo
