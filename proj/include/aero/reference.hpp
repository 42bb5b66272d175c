#pragma once

#include <vector>

namespace aero {

/// Piecewise-constant target pitch in degrees.
struct ReferenceProfile {
  struct Segment {
    double start;       // s
    double target_deg;
  };
  std::vector<Segment> segments;  // sorted by start; first starts at 0

  double at_deg(double t) const;
  double at_rad(double t) const;
  double max_abs_deg() const;
};

/// The 80-second tracking sequence: 0, 5, -5, 20, -20, 40, -40, 0 degrees,
/// switching every 10 s.
ReferenceProfile tracking_sequence();
constexpr double kTrackingDuration = 80.0;

/// 0 degrees for `hold` seconds, then a step to `target_deg`.
ReferenceProfile step_profile(double target_deg, double hold = 10.0);
constexpr double kStepHold = 10.0;
constexpr double kStepDuration = 70.0;  // 10 s hold + 60 s after the step

/// The eight step targets in report order.
std::vector<double> standard_step_targets();

}  // namespace aero
