#include "aero/bench/scenario.hpp"

#include <cmath>

#include "aero/errors.hpp"
#include "aero/io/format.hpp"

namespace aero::bench {

void Scenario::validate(const PlantParams& params) const {
  if (!(duration > 0.0)) throw ConfigError("scenario " + name + ": duration must be positive");
  if (profile.segments.empty() || profile.segments.front().start != 0.0)
    throw ConfigError("scenario " + name + ": profile must start at t = 0");
  for (std::size_t i = 1; i < profile.segments.size(); ++i)
    if (!(profile.segments[i].start > profile.segments[i - 1].start))
      throw ConfigError("scenario " + name + ": profile segments must be increasing in time");
  if (deg_to_rad(profile.max_abs_deg()) > params.theta_limit)
    throw ConfigError("scenario " + name + ": target beyond the mechanical limit");
  if (kind == ScenarioKind::step && !(step_time >= 0.0 && step_time < duration))
    throw ConfigError("scenario " + name + ": step time outside the run");
}

PlantConfig Scenario::apply(PlantConfig plant) const {
  if (imbalance) plant.params.imbalance = *imbalance;
  return plant;
}

std::string step_name(double target_deg) {
  return "step_" + io::format_sig(target_deg);
}

Scenario step_scenario(double target_deg) {
  Scenario s;
  s.name = step_name(target_deg);
  s.kind = ScenarioKind::step;
  s.profile = step_profile(target_deg, kStepHold);
  s.duration = kStepDuration;
  s.step_time = kStepHold;
  s.step_target_deg = target_deg;
  return s;
}

Scenario sequence_scenario() {
  Scenario s;
  s.name = "sequence";
  s.kind = ScenarioKind::sequence;
  s.profile = tracking_sequence();
  s.duration = kTrackingDuration;
  return s;
}

std::vector<Scenario> standard_step_scenarios() {
  std::vector<Scenario> out;
  for (double r : standard_step_targets()) out.push_back(step_scenario(r));
  return out;
}

}  // namespace aero::bench
