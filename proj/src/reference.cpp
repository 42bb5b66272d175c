#include "aero/reference.hpp"

#include <algorithm>
#include <cmath>

#include "aero/units.hpp"

namespace aero {

double ReferenceProfile::at_deg(double t) const {
  double value = segments.empty() ? 0.0 : segments.front().target_deg;
  for (const auto& s : segments) {
    // Sample times are tick * dt; tolerate the rounding at switch instants.
    if (s.start <= t + 1e-9) value = s.target_deg;
    else break;
  }
  return value;
}

double ReferenceProfile::at_rad(double t) const { return deg_to_rad(at_deg(t)); }

double ReferenceProfile::max_abs_deg() const {
  double m = 0.0;
  for (const auto& s : segments) m = std::max(m, std::abs(s.target_deg));
  return m;
}

ReferenceProfile tracking_sequence() {
  const double targets[] = {0.0, 5.0, -5.0, 20.0, -20.0, 40.0, -40.0, 0.0};
  ReferenceProfile p;
  for (int i = 0; i < 8; ++i) p.segments.push_back({10.0 * i, targets[i]});
  return p;
}

ReferenceProfile step_profile(double target_deg, double hold) {
  return {{{0.0, 0.0}, {hold, target_deg}}};
}

std::vector<double> standard_step_targets() {
  return {5.0, 10.0, 20.0, 40.0, -5.0, -10.0, -20.0, -40.0};
}

}  // namespace aero
