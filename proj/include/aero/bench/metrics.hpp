#pragma once

#include <span>
#include <vector>

namespace aero::bench {

/// Logged run, one row per log period. Angles in degrees, u in volts.
struct TimeSeries {
  std::vector<double> t, r, y, u;

  std::size_t size() const { return t.size(); }
  void push(double t_, double r_, double y_, double u_) {
    t.push_back(t_);
    r.push_back(r_);
    y.push_back(y_);
    u.push_back(u_);
  }
};

/// Step-response figures. Undefined quantities are NaN.
struct StepMetrics {
  double target = 0.0;  // deg
  double y_inf = 0.0;   // deg, mean over the final settle_window
  double e_inf = 0.0;   // deg, target − y_inf
  double m_p = 0.0;     // %, NaN when |y_inf| < 0.5°
  double t_r = 0.0;     // s, 10 % → 90 % of y_inf; NaN if never reached
};

struct MetricOptions {
  double step_time = 10.0;     // s
  double settle_window = 10.0; // s
  double min_y_inf = 0.5;      // deg, below this M_p is not applicable
};

/// Metrics on the sign-normalized trace s = y·sign(target) after the step:
///   M_p = max(0, (max s − s_inf) / s_inf · 100)
///   t_r = first time s reaches 0.9 s_inf − first time it reaches 0.1 s_inf
/// Crossings are interpolated linearly between post-step samples.
StepMetrics step_metrics(const TimeSeries& trace, double target_deg,
                         const MetricOptions& options = {});

/// Mean of |y − r| over all samples, degrees.
double sequence_deviation(const TimeSeries& trace);

/// Mean of the finite entries; NaN if there are none.
double finite_mean(std::span<const double> values);

}  // namespace aero::bench
