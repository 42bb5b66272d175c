#pragma once

// Nonlinear 1-DOF pitch beam driven by two opposed fans:
//
//   θ' = ω
//   ω' = -c_ω ω - c_θ sin θ + c_u u + imbalance
//
// The composite coefficients absorb inertia, friction, lever arm, mass and
// motor gain; the defaults are the linearization entries identified on the
// real device.

#include <cstdint>
#include <random>

#include "aero/units.hpp"

namespace aero {

struct PlantParams {
  double c_theta = 0.8185;   // 1/s², gravity restoring
  double c_omega = 0.0503;   // 1/s, viscous damping
  double c_u = 0.0682;       // rad/(s²·V), input gain
  double u_limit = 24.0;     // V
  double theta_limit = deg_to_rad(50.0);
  double imbalance = 0.0;    // rad/s², constant offset

  // Safety mechanism: when within `safety_band` of a stop and still moving
  // toward it, apply `safety_voltage` away from the stop.
  double safety_band = deg_to_rad(5.0);
  double safety_voltage = 5.0;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

struct PlantState {
  double theta = 0.0;
  double omega = 0.0;

  bool operator==(const PlantState&) const = default;
};

/// Mid-tread quantizer on the pitch encoder.
struct SensorModel {
  double quantization_step = deg_to_rad(0.18);
  bool enabled = true;

  void validate() const;
  double measure(double theta) const;
};

template <typename T>
struct StateDerivative {
  T dtheta;
  T domega;
};

/// Right-hand side of the equations of motion. Templated so the Jacobian can
/// be taken by complex-step differentiation.
template <typename T>
StateDerivative<T> derivative(const T& theta, const T& omega, const T& u,
                              const PlantParams& p) {
  using std::sin;
  return {omega, -p.c_omega * omega - p.c_theta * sin(theta) + p.c_u * u + p.imbalance};
}

inline StateDerivative<double> derivative(const PlantState& s, double u,
                                          const PlantParams& p) {
  return derivative<double>(s.theta, s.omega, u, p);
}

struct StepOutput {
  PlantState next;
  double measured_theta;
};

/// One RK4 step of length dt with u saturated to ±u_limit, followed by the
/// inelastic mechanical stop at ±theta_limit. Throws SimulationFault if the
/// state is or becomes non-finite.
StepOutput step(const PlantState& state, double u, double dt, const PlantParams& params,
                const SensorModel& sensor);

/// Voltage actually applied once the safety mechanism has had its say.
double safety_override(const PlantState& state, double u_requested,
                       const PlantParams& params);

bool safety_active(const PlantState& state, const PlantParams& params);

/// Everything needed to instantiate a simulated plant.
struct PlantConfig {
  PlantParams params;
  SensorModel sensor;
  double dt = 1e-3;            // internal integration step, s
  double noise_std = 0.0;      // additive Gaussian measurement noise, rad
  bool safety_enabled = true;

  void validate() const;
};

/// Stateful simulator: integration at cfg.dt with a held input, safety
/// override on every tick, noisy/quantized measurements on demand.
class PlantSimulator {
 public:
  explicit PlantSimulator(PlantConfig config, std::uint64_t seed = 0);

  void reset(PlantState initial = {});

  /// Advance one integration tick with the held request; returns the
  /// voltage actually applied (after saturation and safety override).
  double tick(double u_requested);

  /// Current pitch as seen through the sensor (noise, then quantization).
  double measure();

  const PlantState& state() const { return state_; }
  const PlantConfig& config() const { return config_; }
  /// Number of times the safety mechanism switched on.
  int safety_events() const { return safety_events_; }
  long ticks() const { return ticks_; }

 private:
  PlantConfig config_;
  PlantState state_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
  bool safety_was_active_ = false;
  int safety_events_ = 0;
  long ticks_ = 0;
};

}  // namespace aero
