#pragma once

// Text checkpoint layout (one token group per line):
//
//   aero-ppo-checkpoint v1
//   policy <n_layers+1 sizes, e.g. 3 64 64 1>
//   value <sizes>
//   log_std <value>
//   params <count>
//   <count values, whitespace separated, row-major per layer: W (out x in) then b>
//
// Parameters cover the policy net, the log-std scalar and the value net in
// that order. Values round-trip exactly.

#include <filesystem>
#include <iosfwd>
#include <span>

#include "aero/ppo/actor_critic.hpp"
#include "aero/ppo/ppo.hpp"

namespace aero::ppo {

void write_checkpoint(std::ostream& os, const ActorCritic& ac);
ActorCritic read_checkpoint(std::istream& is);

void save_checkpoint(const std::filesystem::path& path, const ActorCritic& ac);
ActorCritic load_checkpoint(const std::filesystem::path& path);

/// CSV with header step,eval_reward,mean_deviation_deg.
void write_learning_curve(std::ostream& os, std::span<const CurvePoint> curve);

}  // namespace aero::ppo
