#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aero/plant.hpp"
#include "aero/reference.hpp"

namespace aero::bench {

enum class ScenarioKind { step, sequence };

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::sequence;
  ReferenceProfile profile;     // degrees
  double duration = 0.0;        // s
  double step_time = 0.0;       // step scenarios: onset of the step, s
  double step_target_deg = 0.0; // step scenarios: final target
  std::optional<double> imbalance;  // overrides the plant imbalance, rad/s²

  /// Throws ConfigError if a target lies outside the plant's reach or the
  /// profile is malformed.
  void validate(const PlantParams& params) const;
  PlantConfig apply(PlantConfig plant) const;
};

/// 10 s at 0°, then a step to target_deg held for 60 s.
Scenario step_scenario(double target_deg);
/// The 80 s tracking sequence.
Scenario sequence_scenario();

/// Eight step scenarios in report order.
std::vector<Scenario> standard_step_scenarios();

std::string step_name(double target_deg);

}  // namespace aero::bench
