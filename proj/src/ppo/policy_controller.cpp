#include "aero/ppo/policy_controller.hpp"

#include "aero/errors.hpp"

namespace aero::ppo {

PolicyController::PolicyController(ActorCritic ac, double period, double u_limit)
    : ac_(std::move(ac)), period_(period), u_limit_(u_limit) {
  if (!(period_ > 0.0)) throw ConfigError("ppo controller: period must be positive");
  if (!(u_limit_ > 0.0)) throw ConfigError("ppo controller: u_limit must be positive");
}

double PolicyController::control(double y, double r, double /*t*/) {
  const double diff = primed_ ? y - prev_y_ : 0.0;
  prev_y_ = y;
  primed_ = true;
  return deterministic_action(ac_, Observation{y - r, diff, y}, u_limit_);
}

}  // namespace aero::ppo
