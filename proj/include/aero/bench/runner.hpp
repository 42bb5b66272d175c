#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aero/bench/metrics.hpp"
#include "aero/bench/scenario.hpp"
#include "aero/controller.hpp"
#include "aero/errors.hpp"
#include "aero/plant.hpp"

namespace aero::bench {

struct RunOptions {
  double log_period = 0.01;  // s
  bool time_controller = true;
};

struct RunStats {
  long plant_ticks = 0;
  long controller_ticks = 0;
  int safety_events = 0;
  int qp_failures = 0;
  long qp_iterations = 0;
  double mean_control_us = 0.0;  // wall time per control() call
  double max_control_us = 0.0;
};

struct RunResult {
  TimeSeries trace;
  RunStats stats;
};

/// Raised when the plant faults mid-run; carries everything logged so far.
class ScenarioFault : public SimulationFault {
 public:
  ScenarioFault(const std::string& what, TimeSeries partial)
      : SimulationFault(what), partial_(std::move(partial)) {}
  const TimeSeries& partial_trace() const { return partial_; }

 private:
  TimeSeries partial_;
};

/// Multi-rate closed loop. The plant integrates at plant.dt; the controller
/// fires every period()/dt ticks on the sensor reading and its output is held
/// in between; the safety override acts on every plant tick. The log holds
/// (t, r, true θ, applied u) every log_period, taken before each tick.
/// The controller is reset first. `seed` drives measurement noise.
RunResult run_scenario(Controller& controller, const Scenario& scenario,
                       const PlantConfig& plant, std::uint64_t seed,
                       const RunOptions& options = {});

using ControllerFactory = std::function<ControllerPtr()>;

struct BatchJob {
  ControllerFactory make;
  Scenario scenario;
};

struct BatchOutcome {
  std::optional<RunResult> result;
  std::string error;  // set when the run failed
  TimeSeries partial;
};

/// Runs independent jobs, on OpenMP threads when `parallel` is set. Each
/// job builds its own controller and plant. Failures are captured per job.
/// Results do not depend on the thread count.
std::vector<BatchOutcome> run_batch(const std::vector<BatchJob>& jobs, const PlantConfig& plant,
                                    std::uint64_t seed, bool parallel = true,
                                    const RunOptions& options = {});

}  // namespace aero::bench
