#include "aero/bench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aero/errors.hpp"

namespace aero::bench {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Time at which s first reaches `level`, starting from sample `first`.
double first_crossing(const TimeSeries& tr, std::span<const double> s, std::size_t first,
                      double level) {
  for (std::size_t k = first; k < s.size(); ++k) {
    if (s[k] < level) continue;
    if (k == first) return tr.t[k];
    const double frac = (level - s[k - 1]) / (s[k] - s[k - 1]);
    return tr.t[k - 1] + frac * (tr.t[k] - tr.t[k - 1]);
  }
  return kNaN;
}

}  // namespace

StepMetrics step_metrics(const TimeSeries& tr, double target_deg, const MetricOptions& opt) {
  if (tr.size() < 2) throw ConfigError("step metrics: trace too short");
  if (target_deg == 0.0) throw ConfigError("step metrics: target must be nonzero");
  const double end = tr.t.back();
  if (!(end - opt.settle_window >= opt.step_time))
    throw ConfigError("step metrics: trace does not cover the settle window after the step");

  const auto first = static_cast<std::size_t>(
      std::lower_bound(tr.t.begin(), tr.t.end(), opt.step_time - 1e-9) - tr.t.begin());
  const double sign = target_deg > 0.0 ? 1.0 : -1.0;
  std::vector<double> s(tr.size());
  for (std::size_t k = 0; k < tr.size(); ++k) s[k] = sign * tr.y[k];

  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < tr.size(); ++k)
    if (tr.t[k] >= end - opt.settle_window - 1e-9) {
      sum += tr.y[k];
      ++count;
    }

  StepMetrics m;
  m.target = target_deg;
  m.y_inf = sum / static_cast<double>(count);
  m.e_inf = target_deg - m.y_inf;
  const double s_inf = sign * m.y_inf;

  if (std::abs(m.y_inf) < opt.min_y_inf) {
    m.m_p = kNaN;
  } else {
    const double s_max = *std::max_element(s.begin() + static_cast<long>(first), s.end());
    m.m_p = std::max(0.0, (s_max - s_inf) / s_inf * 100.0);
  }

  if (s_inf > 0.0) {
    const double t10 = first_crossing(tr, s, first, 0.1 * s_inf);
    const double t90 = first_crossing(tr, s, first, 0.9 * s_inf);
    m.t_r = t90 - t10;
  } else {
    m.t_r = kNaN;
  }
  return m;
}

double sequence_deviation(const TimeSeries& tr) {
  if (tr.size() == 0) throw ConfigError("sequence deviation: empty trace");
  double sum = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) sum += std::abs(tr.y[k] - tr.r[k]);
  return sum / static_cast<double>(tr.size());
}

double finite_mean(std::span<const double> values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : values)
    if (std::isfinite(v)) {
      sum += v;
      ++n;
    }
  return n ? sum / static_cast<double>(n) : kNaN;
}

}  // namespace aero::bench
