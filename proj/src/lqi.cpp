#include "aero/lqi.hpp"

#include <algorithm>
#include <cmath>

#include "aero/errors.hpp"
#include "aero/numerics/riccati.hpp"

namespace aero::lqi {

num::Matrix default_q() { return num::Matrix::diagonal({10.0, 1.0, 100.0}); }

num::Matrix augmented_a(const LinearModel& model) {
  const std::size_t n = model.a.rows();
  num::Matrix a(n + 1, n + 1);
  a.set_block(0, 0, model.a);
  for (std::size_t j = 0; j < n; ++j) a(n, j) = -model.c[j];
  return a;
}

num::Vector augmented_b(const LinearModel& model) {
  num::Vector b(model.b.size() + 1);
  for (std::size_t i = 0; i < model.b.size(); ++i) b[i] = model.b[i];
  return b;
}

LqiGain synthesize(const LinearModel& model, const num::Matrix& q, double r, double ts) {
  num::require_shape(model.a.rows() == 2 && model.b.size() == 2 && model.c.size() == 2,
                     "LQI expects the two-state pitch model");
  num::require_shape(q.rows() == 3 && q.cols() == 3, "LQI weight Q must be 3x3");
  if (!(r > 0.0)) throw SynthesisError("LQI: R must be positive");
  if (!(ts > 0.0)) throw SynthesisError("LQI: control period must be positive");

  const num::Matrix a = augmented_a(model);
  const num::Matrix b = num::Matrix::column(augmented_b(model));
  const auto sol = num::solve_care(a, b, q, num::Matrix{{r}});

  LqiGain gain;
  gain.ts = ts;
  for (std::size_t j = 0; j < 3; ++j) gain.k[j] = sol.k(0, j);
  return gain;
}

LqiOutput control(double measured_theta, double r, const LqiState& state,
                  const LqiGain& gain, const LqiOptions& options) {
  LqiState next = state;
  const double ts = gain.ts;

  double raw = 0.0;
  if (state.primed) raw = (measured_theta - state.prev_theta) / ts;
  const double alpha = 1.0 - std::exp(-ts / options.filter_tau);
  next.prev_deriv = state.prev_deriv + alpha * (raw - state.prev_deriv);
  next.prev_theta = measured_theta;
  next.primed = true;

  const auto law = [&](double x_i) {
    return -gain.k[0] * measured_theta - gain.k[1] * next.prev_deriv - gain.k[2] * x_i;
  };

  next.x_i = state.x_i + (r - measured_theta) * ts;
  double u = law(next.x_i);
  if (std::abs(u) > options.u_limit) {
    // Clamping anti-windup: hold the integrator while saturated.
    next.x_i = state.x_i;
    u = law(next.x_i);
  }
  return {std::clamp(u, -options.u_limit, options.u_limit), next};
}

LqiController::LqiController(LqiGain gain, LqiOptions options)
    : gain_(gain), options_(options) {
  if (!(gain_.ts > 0.0)) throw ConfigError("LQI: control period must be positive");
  if (!(options_.filter_tau > 0.0)) throw ConfigError("LQI: filter_tau must be positive");
}

double LqiController::control(double y, double r, double /*t*/) {
  auto out = lqi::control(y, r, state_, gain_, options_);
  state_ = out.state;
  return out.u;
}

}  // namespace aero::lqi
