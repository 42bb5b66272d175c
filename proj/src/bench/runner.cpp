#include "aero/bench/runner.hpp"

#include <chrono>
#include <cmath>

namespace aero::bench {
namespace {

long ticks_for(double period, double dt, const char* what) {
  const double ratio = period / dt;
  const long n = std::lround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio)
    throw ConfigError(std::string(what) + " must be a whole multiple of the plant step");
  return n;
}

}  // namespace

RunResult run_scenario(Controller& controller, const Scenario& scenario,
                       const PlantConfig& plant_cfg, std::uint64_t seed,
                       const RunOptions& options) {
  const PlantConfig cfg = scenario.apply(plant_cfg);
  cfg.validate();
  scenario.validate(cfg.params);
  const long control_ticks = ticks_for(controller.period(), cfg.dt, "controller period");
  const long log_ticks = ticks_for(options.log_period, cfg.dt, "log period");
  const long total = ticks_for(scenario.duration, cfg.dt, "scenario duration");

  PlantSimulator sim(cfg, seed);
  sim.reset();
  controller.reset();

  RunResult out;
  out.trace.t.reserve(static_cast<std::size_t>(total / log_ticks + 1));
  RunStats& st = out.stats;
  double u_hold = 0.0;
  double time_sum = 0.0;
  using clock = std::chrono::steady_clock;

  try {
    for (long k = 0; k < total; ++k) {
      const double t = static_cast<double>(k) * cfg.dt;
      const double r_deg = scenario.profile.at_deg(t);
      if (k % control_ticks == 0) {
        const double y = sim.measure();
        const auto t0 = options.time_controller ? clock::now() : clock::time_point{};
        u_hold = controller.control(y, deg_to_rad(r_deg), t);
        if (options.time_controller) {
          const double us =
              std::chrono::duration<double, std::micro>(clock::now() - t0).count();
          time_sum += us;
          st.max_control_us = std::max(st.max_control_us, us);
        }
        const auto d = controller.diagnostics();
        st.qp_iterations += d.qp_iterations;
        if (d.qp_failed) ++st.qp_failures;
        ++st.controller_ticks;
      }
      const double theta_deg = rad_to_deg(sim.state().theta);
      const double applied = sim.tick(u_hold);
      if (k % log_ticks == 0) out.trace.push(t, r_deg, theta_deg, applied);
    }
  } catch (const SimulationFault& e) {
    throw ScenarioFault(scenario.name + ": " + e.what(), std::move(out.trace));
  }
  st.plant_ticks = sim.ticks();
  st.safety_events = sim.safety_events();
  if (st.controller_ticks > 0) st.mean_control_us = time_sum / static_cast<double>(st.controller_ticks);
  return out;
}

std::vector<BatchOutcome> run_batch(const std::vector<BatchJob>& jobs, const PlantConfig& plant,
                                    std::uint64_t seed, bool parallel,
                                    const RunOptions& options) {
  std::vector<BatchOutcome> out(jobs.size());
  const long n = static_cast<long>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (long i = 0; i < n; ++i) {
    BatchOutcome& o = out[static_cast<std::size_t>(i)];
    try {
      ControllerPtr c = jobs[static_cast<std::size_t>(i)].make();
      o.result = run_scenario(*c, jobs[static_cast<std::size_t>(i)].scenario, plant, seed, options);
    } catch (const ScenarioFault& e) {
      o.error = e.what();
      o.partial = e.partial_trace();
    } catch (const std::exception& e) {
      o.error = e.what();
    }
  }
  return out;
}

}  // namespace aero::bench
