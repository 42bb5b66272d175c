#pragma once

// Linear-quadratic regulator with an error integrator (LQI).
//
// Augmented state z = (θ, ω, x_i) with x_i' = r − θ:
//
//   z' = [[A, 0], [−cᵀ, 0]] z + [b; 0] u
//
// The gain k minimizes ∫ zᵀQz + uRu and the online law is u = −kᵀz with ω
// estimated by a filtered first difference of the measured pitch.

#include <array>

#include "aero/controller.hpp"
#include "aero/model.hpp"
#include "aero/numerics/matrix.hpp"

namespace aero::lqi {

struct LqiGain {
  std::array<double, 3> k{};
  double ts = 0.002;
};

struct LqiState {
  double x_i = 0.0;          // ∫(r − θ) dt, rad·s
  double prev_theta = 0.0;   // last measurement, rad
  double prev_deriv = 0.0;   // filtered velocity, rad/s
  bool primed = false;       // false until the first sample is seen
};

struct LqiOptions {
  double filter_tau = 0.02;  // low-pass time constant on the velocity, s
  double u_limit = 24.0;
};

struct LqiOutput {
  double u;
  LqiState state;
};

/// Q defaults to diag(10, 1, 100), R to 0.001.
num::Matrix default_q();
constexpr double kDefaultR = 0.001;
constexpr double kDefaultPeriod = 0.002;

/// Build the integrator-augmented system and solve the CARE. Throws
/// SynthesisError when Q/R are invalid or the augmented pair is not
/// stabilizable/detectable (e.g. Q = 0).
LqiGain synthesize(const LinearModel& model, const num::Matrix& q, double r,
                   double ts = kDefaultPeriod);

/// The augmented pair (Ā, b̄) used by synthesize(), exposed for testing.
num::Matrix augmented_a(const LinearModel& model);
num::Vector augmented_b(const LinearModel& model);

/// One sample of the control law. Pure: returns the new state.
LqiOutput control(double measured_theta, double r, const LqiState& state,
                  const LqiGain& gain, const LqiOptions& options = {});

class LqiController final : public Controller {
 public:
  LqiController(LqiGain gain, LqiOptions options = {});

  std::string name() const override { return "lqi"; }
  double period() const override { return gain_.ts; }
  void reset() override { state_ = {}; }
  double control(double y, double r, double t) override;

  const LqiGain& gain() const { return gain_; }
  const LqiState& state() const { return state_; }

 private:
  LqiGain gain_;
  LqiOptions options_;
  LqiState state_;
};

}  // namespace aero::lqi
