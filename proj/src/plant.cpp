#include "aero/plant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aero/errors.hpp"

namespace aero {

void PlantParams::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError("plant: " + m); };
  if (!(c_theta > 0.0)) fail("c_theta must be positive");
  if (!(c_omega >= 0.0)) fail("c_omega must be non-negative");
  if (!(c_u > 0.0)) fail("c_u must be positive");
  if (!(u_limit > 0.0)) fail("u_limit must be positive");
  if (!(theta_limit > deg_to_rad(40.0)))
    fail("theta_limit must exceed 40 degrees so every scenario target is reachable");
  if (!std::isfinite(imbalance)) fail("imbalance must be finite");
  if (!(safety_band >= 0.0 && safety_band < theta_limit))
    fail("safety_band must lie in [0, theta_limit)");
  if (!(safety_voltage >= 0.0)) fail("safety_voltage must be non-negative");
}

void SensorModel::validate() const {
  if (enabled && !(quantization_step > 0.0))
    throw ConfigError("sensor: quantization_step must be positive when enabled");
}

double SensorModel::measure(double theta) const {
  if (!enabled) return theta;
  return quantization_step * std::round(theta / quantization_step);
}

StepOutput step(const PlantState& state, double u, double dt, const PlantParams& params,
                const SensorModel& sensor) {
  if (!(dt > 0.0)) throw SimulationFault("plant step: dt must be positive");
  if (!std::isfinite(state.theta) || !std::isfinite(state.omega) || !std::isfinite(u))
    throw SimulationFault("plant step: non-finite state or input");
  const double v = std::clamp(u, -params.u_limit, params.u_limit);

  const double th = state.theta, om = state.omega;
  const auto k1 = derivative<double>(th, om, v, params);
  const auto k2 = derivative<double>(th + 0.5 * dt * k1.dtheta, om + 0.5 * dt * k1.domega, v, params);
  const auto k3 = derivative<double>(th + 0.5 * dt * k2.dtheta, om + 0.5 * dt * k2.domega, v, params);
  const auto k4 = derivative<double>(th + dt * k3.dtheta, om + dt * k3.domega, v, params);

  PlantState next{
      th + dt / 6.0 * (k1.dtheta + 2.0 * k2.dtheta + 2.0 * k3.dtheta + k4.dtheta),
      om + dt / 6.0 * (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega)};
  if (!std::isfinite(next.theta) || !std::isfinite(next.omega))
    throw SimulationFault("plant step: state became non-finite");

  // Inelastic stop.
  if (next.theta > params.theta_limit) {
    next.theta = params.theta_limit;
    next.omega = 0.0;
  } else if (next.theta < -params.theta_limit) {
    next.theta = -params.theta_limit;
    next.omega = 0.0;
  }
  return {next, sensor.measure(next.theta)};
}

bool safety_active(const PlantState& s, const PlantParams& p) {
  const double trigger = p.theta_limit - p.safety_band;
  return (s.theta >= trigger && s.omega > 0.0) || (s.theta <= -trigger && s.omega < 0.0);
}

double safety_override(const PlantState& s, double u_requested, const PlantParams& p) {
  if (!safety_active(s, p)) return u_requested;
  return s.omega > 0.0 ? -p.safety_voltage : p.safety_voltage;
}

void PlantConfig::validate() const {
  params.validate();
  sensor.validate();
  if (!(dt > 0.0)) throw ConfigError("plant: dt must be positive");
  if (!(noise_std >= 0.0)) throw ConfigError("plant: noise_std must be non-negative");
}

PlantSimulator::PlantSimulator(PlantConfig config, std::uint64_t seed)
    : config_(std::move(config)), rng_(seed) {
  config_.validate();
}

void PlantSimulator::reset(PlantState initial) {
  state_ = initial;
  safety_was_active_ = false;
  safety_events_ = 0;
  ticks_ = 0;
}

double PlantSimulator::tick(double u_requested) {
  double u = std::clamp(u_requested, -config_.params.u_limit, config_.params.u_limit);
  if (config_.safety_enabled) {
    const bool active = safety_active(state_, config_.params);
    if (active && !safety_was_active_) ++safety_events_;
    safety_was_active_ = active;
    u = safety_override(state_, u, config_.params);
  }
  state_ = step(state_, u, config_.dt, config_.params, SensorModel{0.0, false}).next;
  ++ticks_;
  return u;
}

double PlantSimulator::measure() {
  double theta = state_.theta;
  if (config_.noise_std > 0.0) theta += config_.noise_std * noise_(rng_);
  return config_.sensor.measure(theta);
}

}  // namespace aero
