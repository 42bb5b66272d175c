#include "aero/bench/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>

#include "aero/io/format.hpp"

namespace aero::bench {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return io::format_sig(v); }

std::vector<double> collect(const ControllerRow& row, double StepMetrics::*field, bool absolute) {
  std::vector<double> out;
  for (const auto& s : row.steps)
    if (s) out.push_back(absolute ? std::abs((*s).*field) : (*s).*field);
  return out;
}

std::string implementation_complexity(const std::string& controller) {
  if (controller == "lqi") return "low";
  if (controller == "mpc" || controller == "ppo") return "medium";
  return "n/a";
}

// One table line; the cells with the smallest |value| are bold.
void metric_line(std::ostream& os, const std::string& label, const std::string& target,
                 const std::vector<double>& values, const std::string& unit) {
  double best = std::numeric_limits<double>::infinity();
  for (double v : values)
    if (std::isfinite(v)) best = std::min(best, std::abs(v));
  os << "| " << label << " | " << target << " |";
  for (double v : values) {
    if (std::isnan(v)) {
      os << " n/a |";
      continue;
    }
    const std::string cell = num(v) + unit;
    const bool bold = std::isfinite(best) && num(std::abs(v)) == num(best);
    os << ' ' << (bold ? "**" + cell + "**" : cell) << " |";
  }
  os << '\n';
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  body(os);
  if (!os) throw ConfigError("error writing " + path.string());
}

}  // namespace

double ControllerRow::mean_abs_e_inf() const {
  return finite_mean(collect(*this, &StepMetrics::e_inf, true));
}
double ControllerRow::mean_m_p() const { return finite_mean(collect(*this, &StepMetrics::m_p, false)); }
double ControllerRow::mean_t_r() const { return finite_mean(collect(*this, &StepMetrics::t_r, false)); }
double ControllerRow::mean_control_us() const {
  return control_calls > 0 ? total_control_us / static_cast<double>(control_calls) : kNaN;
}

const ControllerRow* RunReport::find(const std::string& controller) const {
  for (const auto& r : rows)
    if (r.controller == controller) return &r;
  return nullptr;
}

std::string effort_bucket(double us) {
  if (!std::isfinite(us)) return "n/a";
  if (us < 10.0) return "low";
  if (us < 50.0) return "medium";
  return "high";
}

CompareResult compare(const std::vector<NamedController>& controllers, const PlantConfig& plant,
                      std::uint64_t seed, const CompareOptions& opt) {
  std::vector<Scenario> scenarios;
  for (double r : opt.targets) scenarios.push_back(step_scenario(r));
  if (opt.include_sequence) scenarios.push_back(sequence_scenario());

  std::vector<BatchJob> jobs;
  for (const auto& c : controllers)
    for (const auto& s : scenarios) jobs.push_back({c.make, s});
  const auto outcomes = run_batch(jobs, plant, seed, opt.parallel, opt.run);

  if (opt.out_dir) std::filesystem::create_directories(*opt.out_dir / "traces");

  CompareResult res;
  res.report.targets = opt.targets;
  std::size_t j = 0;
  for (const auto& c : controllers) {
    ControllerRow row;
    row.controller = c.name;
    for (const auto& s : scenarios) {
      const BatchOutcome& o = outcomes[j++];
      const bool is_step = s.kind == ScenarioKind::step;
      const TimeSeries* trace = o.result ? &o.result->trace : &o.partial;
      if (opt.out_dir && trace->size() > 0)
        write_file(*opt.out_dir / "traces" / (c.name + "_" + s.name + ".csv"),
                   [&](std::ostream& os) { write_trace_csv(os, *trace); });

      if (o.result) {
        const RunStats& st = o.result->stats;
        row.control_calls += st.controller_ticks;
        row.total_control_us += st.mean_control_us * static_cast<double>(st.controller_ticks);
        row.max_control_us = std::max(row.max_control_us, st.max_control_us);
        row.qp_failures += st.qp_failures;
        row.safety_events += st.safety_events;
      }
      if (is_step) {
        if (o.result) {
          MetricOptions mo;
          mo.step_time = s.step_time;
          row.steps.push_back(step_metrics(o.result->trace, s.step_target_deg, mo));
          row.step_errors.emplace_back();
        } else {
          row.steps.push_back(std::nullopt);
          row.step_errors.push_back(o.error);
        }
      } else if (o.result) {
        row.sequence_deviation = sequence_deviation(o.result->trace);
        res.sequence_traces.emplace_back(c.name, o.result->trace);
      } else {
        row.sequence_error = o.error;
      }
    }
    res.report.rows.push_back(std::move(row));
  }

  if (opt.out_dir) {
    const auto& dir = *opt.out_dir;
    write_file(dir / "report.md", [&](std::ostream& os) { write_markdown(os, res.report); });
    write_file(dir / "report.csv", [&](std::ostream& os) { write_report_csv(os, res.report); });
    if (!res.sequence_traces.empty())
      write_file(dir / "plotdata.csv",
                 [&](std::ostream& os) { write_plotdata(os, res.sequence_traces); });
  }
  return res;
}

void write_markdown(std::ostream& os, const RunReport& rep) {
  const auto& rows = rep.rows;
  os << "# Controller comparison\n\n";
  os << "Lower is better; the best value per line is bold.\n\n";
  os << "| Metric | r |";
  for (const auto& r : rows) os << ' ' << r.controller << " |";
  os << "\n|---|---|";
  for (std::size_t i = 0; i < rows.size(); ++i) os << "---|";
  os << '\n';

  auto per_target = [&](const char* label, double StepMetrics::*field, const std::string& unit) {
    for (std::size_t k = 0; k < rep.targets.size(); ++k) {
      std::vector<double> v;
      for (const auto& r : rows) v.push_back(r.steps.at(k) ? (*r.steps[k]).*field : kNaN);
      metric_line(os, label, num(rep.targets[k]) + "°", v, unit);
    }
  };
  auto summary = [&](const std::string& label, const std::function<double(const ControllerRow&)>& f,
                     const std::string& unit) {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(f(r));
    metric_line(os, label, "", v, unit);
  };

  per_target("e_inf", &StepMetrics::e_inf, " °");
  summary("mean abs e_inf", [](const ControllerRow& r) { return r.mean_abs_e_inf(); }, " °");
  per_target("M_p", &StepMetrics::m_p, " %");
  summary("mean M_p", [](const ControllerRow& r) { return r.mean_m_p(); }, " %");
  per_target("t_r", &StepMetrics::t_r, " s");
  summary("mean t_r", [](const ControllerRow& r) { return r.mean_t_r(); }, " s");
  summary("mean abs Delta (80 s run)",
          [](const ControllerRow& r) { return r.sequence_deviation.value_or(kNaN); }, " °");
  summary("control time per step", [](const ControllerRow& r) { return r.mean_control_us(); }, " µs");
  summary("max control time", [](const ControllerRow& r) { return r.max_control_us; }, " µs");

  os << "| Computational effort | |";
  for (const auto& r : rows) os << ' ' << effort_bucket(r.mean_control_us()) << " |";
  os << "\n| QP failures | |";
  for (const auto& r : rows) os << ' ' << r.qp_failures << " |";
  os << "\n| Safety events | |";
  for (const auto& r : rows) os << ' ' << r.safety_events << " |";
  os << "\n| Implementation complexity | |";
  for (const auto& r : rows) os << ' ' << implementation_complexity(r.controller) << " |";
  os << '\n';

  bool header = false;
  for (const auto& r : rows) {
    auto note = [&](const std::string& scenario, const std::string& err) {
      if (err.empty()) return;
      if (!header) os << "\n## Failed runs\n\n";
      header = true;
      os << "- " << r.controller << ", " << scenario << ": " << err << '\n';
    };
    for (std::size_t k = 0; k < r.step_errors.size(); ++k) note(step_name(rep.targets[k]), r.step_errors[k]);
    note("sequence", r.sequence_error);
  }
}

void write_report_csv(std::ostream& os, const RunReport& rep) {
  os << "controller,metric,target_deg,value\n";
  for (const auto& r : rep.rows) {
    auto line = [&](const char* metric, const std::string& target, double v) {
      os << r.controller << ',' << metric << ',' << target << ',' << num(v) << '\n';
    };
    for (std::size_t k = 0; k < rep.targets.size(); ++k) {
      const std::string t = num(rep.targets[k]);
      const auto& s = r.steps[k];
      line("e_inf_deg", t, s ? s->e_inf : kNaN);
      line("m_p_pct", t, s ? s->m_p : kNaN);
      line("t_r_s", t, s ? s->t_r : kNaN);
    }
    line("mean_abs_e_inf_deg", "", r.mean_abs_e_inf());
    line("mean_m_p_pct", "", r.mean_m_p());
    line("mean_t_r_s", "", r.mean_t_r());
    line("mean_abs_delta_deg", "", r.sequence_deviation.value_or(kNaN));
    line("mean_control_us", "", r.mean_control_us());
    line("max_control_us", "", r.max_control_us);
    line("qp_failures", "", r.qp_failures);
    line("safety_events", "", r.safety_events);
  }
}

void write_trace_csv(std::ostream& os, const TimeSeries& tr) {
  os << "t,r,y,u\n";
  for (std::size_t k = 0; k < tr.size(); ++k)
    os << num(tr.t[k]) << ',' << num(tr.r[k]) << ',' << num(tr.y[k]) << ',' << num(tr.u[k]) << '\n';
}

void write_plotdata(std::ostream& os,
                    const std::vector<std::pair<std::string, TimeSeries>>& traces) {
  if (traces.empty()) return;
  const TimeSeries& ref = traces.front().second;
  os << "t,r";
  for (const auto& [name, _] : traces) os << ",y_" << name;
  for (const auto& [name, _] : traces) os << ",u_" << name;
  os << '\n';
  for (std::size_t k = 0; k < ref.size(); ++k) {
    os << num(ref.t[k]) << ',' << num(ref.r[k]);
    for (const auto& [_, tr] : traces) os << ',' << (k < tr.size() ? num(tr.y[k]) : "");
    for (const auto& [_, tr] : traces) os << ',' << (k < tr.size() ? num(tr.u[k]) : "");
    os << '\n';
  }
}

}  // namespace aero::bench
