#include "aero/sysid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "aero/errors.hpp"
#include "aero/io/format.hpp"

namespace aero::sysid {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Point = std::array<double, 3>;

PlantParams with_coefficients(PlantParams base, const Point& x) {
  base.c_theta = x[0];
  base.c_omega = x[1];
  base.c_u = x[2];
  return base;
}

struct NmResult {
  Point x;
  double f;
  int evaluations;
};

template <typename F>
NmResult nelder_mead(F&& f, const Point& start, int max_evals, double tol) {
  constexpr int n = 3;
  std::array<Point, n + 1> simplex;
  std::array<double, n + 1> fv;
  simplex[0] = start;
  for (int i = 0; i < n; ++i) {
    simplex[i + 1] = start;
    const double h = start[i] != 0.0 ? 0.1 * std::abs(start[i]) : 1e-3;
    simplex[i + 1][i] += h;
  }
  int evals = 0;
  auto eval = [&](const Point& p) {
    ++evals;
    return f(p);
  };
  for (int i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

  std::array<int, n + 1> order;
  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    {
      std::array<Point, n + 1> s2;
      std::array<double, n + 1> f2;
      for (int i = 0; i <= n; ++i) {
        s2[i] = simplex[order[i]];
        f2[i] = fv[order[i]];
      }
      simplex = s2;
      fv = f2;
    }

    double size = 0.0;
    for (int i = 1; i <= n; ++i)
      for (int j = 0; j < n; ++j)
        size = std::max(size, std::abs(simplex[i][j] - simplex[0][j]) /
                                  std::max(std::abs(simplex[0][j]), 1e-12));
    if (size < tol) break;

    Point centroid{};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;
    auto along = [&](double coef) {
      Point p;
      for (int j = 0; j < n; ++j) p[j] = centroid[j] + coef * (simplex[n][j] - centroid[j]);
      return p;
    };

    const Point xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < fv[0]) {
      const Point xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        fv[n] = fe;
      } else {
        simplex[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      simplex[n] = xr;
      fv[n] = fr;
    } else {
      const bool outside = fr < fv[n];
      const Point xc = along(outside ? -0.5 : 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fv[n])) {
        simplex[n] = xc;
        fv[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          for (int j = 0; j < n; ++j)
            simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
          fv[i] = eval(simplex[i]);
        }
      }
    }
  }
  const auto best = std::min_element(fv.begin(), fv.end()) - fv.begin();
  return {simplex[best], fv[best], evals};
}

}  // namespace

double IdentDataset::sample_period() const {
  if (t.size() < 2) throw ConfigError("dataset: need at least two samples");
  return (t.back() - t.front()) / static_cast<double>(t.size() - 1);
}

void IdentDataset::validate() const {
  if (t.empty()) throw ConfigError("dataset is empty");
  if (u.size() != t.size() || theta.size() != t.size() || omega.size() != t.size())
    throw ConfigError("dataset columns have different lengths");
  for (std::size_t k = 0; k < t.size(); ++k)
    if (!std::isfinite(t[k]) || !std::isfinite(u[k]) || !std::isfinite(theta[k]) ||
        !std::isfinite(omega[k]))
      throw ConfigError("dataset contains non-finite values at row " + std::to_string(k));
  if (t.size() < 2) return;
  const double ts = sample_period();
  if (!(ts > 0.0)) throw ConfigError("dataset time must increase");
  for (std::size_t k = 1; k < t.size(); ++k)
    if (std::abs(t[k] - t[k - 1] - ts) > 1e-6 * ts + 1e-9)
      throw ConfigError("dataset is not uniformly sampled at row " + std::to_string(k));
}

IdentDataset generate_test_sequence(const PlantParams& params, std::uint64_t seed,
                                    const SequenceOptions& opt) {
  params.validate();
  if (opt.amplitudes.empty()) throw ConfigError("sysid: no amplitudes");
  if (!(opt.sample_period > 0.0 && opt.dt > 0.0 && opt.segment_duration > 0.0))
    throw ConfigError("sysid: periods must be positive");
  const long substeps = std::lround(opt.sample_period / opt.dt);
  const long per_segment = std::lround(opt.segment_duration / opt.sample_period);
  if (substeps < 1 || std::abs(substeps * opt.dt - opt.sample_period) > 1e-9)
    throw ConfigError("sysid: sample_period must be a multiple of dt");

  const SensorModel sensor{deg_to_rad(0.18), opt.quantize};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  auto measure = [&](double theta) {
    const double n = opt.noise_std > 0.0 ? opt.noise_std * noise(rng) : 0.0;
    return sensor.measure(theta + n);
  };

  IdentDataset d;
  const std::size_t total = opt.amplitudes.size() * static_cast<std::size_t>(per_segment);
  d.t.reserve(total);
  d.u.reserve(total);
  d.theta.reserve(total);
  d.omega.reserve(total);

  PlantState s;
  long k = 0;
  for (double amp : opt.amplitudes) {
    for (long i = 0; i < per_segment; ++i, ++k) {
      double u = std::clamp(amp, -params.u_limit, params.u_limit);
      if (opt.safety_enabled) u = safety_override(s, u, params);
      d.t.push_back(static_cast<double>(k) * opt.sample_period);
      d.u.push_back(u);
      d.theta.push_back(measure(s.theta));
      d.omega.push_back(s.omega);
      for (long j = 0; j < substeps; ++j) s = step(s, u, opt.dt, params, SensorModel{0.0, false}).next;
    }
  }
  return d;
}

double objective(const IdentDataset& data, const PlantParams& params, int substeps) {
  if (!(params.c_theta > 0.0 && params.c_omega >= 0.0 && params.c_u > 0.0)) return kInf;
  if (data.size() == 0) return 0.0;
  const double h = data.size() > 1 ? data.sample_period() / substeps : 0.0;
  const SensorModel exact{0.0, false};
  PlantState s{data.theta[0], data.omega[0]};
  double cost = 0.0;
  try {
    for (std::size_t k = 0; k < data.size(); ++k) {
      cost += std::abs(data.theta[k] - s.theta) + std::abs(data.omega[k] - s.omega);
      if (k + 1 == data.size()) break;
      for (int j = 0; j < substeps; ++j) s = step(s, data.u[k], h, params, exact).next;
    }
  } catch (const SimulationFault&) {
    return kInf;
  }
  return std::isfinite(cost) ? cost : kInf;
}

FitResult fit(const IdentDataset& data, const PlantParams& init_guess, const FitOptions& opt) {
  data.validate();
  if (opt.restarts < 1) throw ConfigError("sysid: restarts must be at least 1");
  if (opt.substeps < 1) throw ConfigError("sysid: substeps must be at least 1");
  if (!(opt.perturbation >= 0.0 && opt.perturbation < 1.0))
    throw ConfigError("sysid: perturbation must be in [0, 1)");

  const Point x0{init_guess.c_theta, init_guess.c_omega, init_guess.c_u};
  std::vector<Point> starts{x0};
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> spread(-opt.perturbation, opt.perturbation);
  while (static_cast<int>(starts.size()) < opt.restarts) {
    Point p = x0;
    for (auto& v : p) v *= 1.0 + spread(rng);
    starts.push_back(p);
  }

  auto cost = [&](const Point& x) {
    return objective(data, with_coefficients(init_guess, x), opt.substeps);
  };

  std::vector<NmResult> results(starts.size());
  const int n_starts = static_cast<int>(starts.size());
#pragma omp parallel for schedule(dynamic, 1) if (opt.parallel)
  for (int i = 0; i < n_starts; ++i) {
    // A second pass from the converged point rebuilds a full-size simplex and
    // escapes the occasional collapsed one.
    NmResult r = nelder_mead(cost, starts[i], opt.max_evaluations, opt.tolerance);
    NmResult r2 = nelder_mead(cost, r.x, opt.max_evaluations, opt.tolerance);
    r2.evaluations += r.evaluations;
    if (r.f < r2.f) {
      r.evaluations = r2.evaluations;
      r2 = r;
    }
    results[i] = r2;
  }

  FitResult out;
  out.initial_cost = cost(x0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    out.start_costs.push_back(results[i].f);
    out.evaluations += results[i].evaluations;
    if (results[i].f < results[best].f) best = i;
  }
  out.params = with_coefficients(init_guess, results[best].x);
  out.cost = results[best].f;
  return out;
}

void write_csv(std::ostream& os, const IdentDataset& d) {
  os << "t,u,theta,omega\n";
  for (std::size_t k = 0; k < d.size(); ++k)
    os << io::format_exact(d.t[k]) << ',' << io::format_exact(d.u[k]) << ','
       << io::format_exact(d.theta[k]) << ',' << io::format_exact(d.omega[k]) << '\n';
}

IdentDataset read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("dataset: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,u,theta,omega") throw ConfigError("dataset: header must be 't,u,theta,omega'");
  IdentDataset d;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<double, 4> v{};
    std::size_t col = 0, pos = 0;
    for (;;) {
      const auto comma = line.find(',', pos);
      if (col >= v.size()) throw ConfigError("dataset: too many columns on line " + std::to_string(row));
      const auto field = std::string_view(line).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      try {
        v[col++] = io::parse_double(field);
      } catch (const ConfigError& e) {
        throw ConfigError("dataset line " + std::to_string(row) + ": " + e.what());
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (col != v.size()) throw ConfigError("dataset: expected 4 columns on line " + std::to_string(row));
    d.t.push_back(v[0]);
    d.u.push_back(v[1]);
    d.theta.push_back(v[2]);
    d.omega.push_back(v[3]);
  }
  d.validate();
  return d;
}

void save_csv(const std::filesystem::path& path, const IdentDataset& data) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  write_csv(os, data);
}

IdentDataset load_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path.string());
  return read_csv(is);
}

}  // namespace aero::sysid
