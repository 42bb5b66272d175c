#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aero/bench/metrics.hpp"
#include "aero/bench/runner.hpp"

namespace aero::bench {

struct ControllerRow {
  std::string controller;
  std::vector<std::optional<StepMetrics>> steps;  // aligned with RunReport::targets
  std::vector<std::string> step_errors;           // empty string when the run succeeded
  std::optional<double> sequence_deviation;       // deg
  std::string sequence_error;
  long control_calls = 0;
  double total_control_us = 0.0;
  double max_control_us = 0.0;
  int qp_failures = 0;
  int safety_events = 0;

  // Averages are always recomputed from the rows above.
  double mean_abs_e_inf() const;
  double mean_m_p() const;
  double mean_t_r() const;
  double mean_control_us() const;
};

struct RunReport {
  std::vector<double> targets;  // deg, report order
  std::vector<ControllerRow> rows;

  const ControllerRow* find(const std::string& controller) const;
};

/// low < 10 µs ≤ medium < 50 µs ≤ high, per control() call.
std::string effort_bucket(double mean_control_us);

struct NamedController {
  std::string name;
  ControllerFactory make;
};

struct CompareOptions {
  std::vector<double> targets = standard_step_targets();
  bool include_sequence = true;
  bool parallel = true;
  RunOptions run;
  std::optional<std::filesystem::path> out_dir;  // files are written only when set
};

struct CompareResult {
  RunReport report;
  std::vector<std::pair<std::string, TimeSeries>> sequence_traces;  // per controller
};

/// Runs every controller on every step target and on the tracking sequence.
/// A failing run marks its cell and the rest continue. With out_dir set,
/// writes traces/<controller>_<scenario>.csv, report.md, report.csv and
/// plotdata.csv there.
CompareResult compare(const std::vector<NamedController>& controllers, const PlantConfig& plant,
                      std::uint64_t seed, const CompareOptions& options = {});

void write_markdown(std::ostream& os, const RunReport& report);
/// Long format: controller,metric,target_deg,value.
void write_report_csv(std::ostream& os, const RunReport& report);
void write_trace_csv(std::ostream& os, const TimeSeries& trace);
/// t, r, then y_<name> and u_<name> per controller on the common time grid.
void write_plotdata(std::ostream& os,
                    const std::vector<std::pair<std::string, TimeSeries>>& traces);

}  // namespace aero::bench
