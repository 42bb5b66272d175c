#pragma once

#include "aero/controller.hpp"
#include "aero/ppo/actor_critic.hpp"

namespace aero::ppo {

/// Runs a trained policy in eval mode (mean action) every 100 ms. The
/// observation is rebuilt from the measured pitch exactly as during training.
class PolicyController final : public Controller {
 public:
  explicit PolicyController(ActorCritic ac, double period = 0.1, double u_limit = 24.0);

  std::string name() const override { return "ppo"; }
  double period() const override { return period_; }
  void reset() override { primed_ = false; }
  double control(double y, double r, double t) override;

  const ActorCritic& policy() const { return ac_; }

 private:
  ActorCritic ac_;
  double period_;
  double u_limit_;
  double prev_y_ = 0.0;
  bool primed_ = false;
};

}  // namespace aero::ppo
