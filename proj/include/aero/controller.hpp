#pragma once

#include <memory>
#include <string>

namespace aero {

/// Extra per-sample information a controller may expose to the runner.
struct ControlDiagnostics {
  int qp_iterations = 0;
  bool qp_failed = false;  // iteration cap hit, best iterate applied
};

/// Sampled-data controller driven by the benchmark runner. The runner calls
/// control() exactly once every `period_ticks()` plant integration ticks and
/// holds the returned voltage until the next call.
class Controller {
 public:
  virtual ~Controller() = default;

  virtual std::string name() const = 0;
  /// Control period, s.
  virtual double period() const = 0;
  /// Clear all internal state; called at the start of every run.
  virtual void reset() = 0;
  /// y: measured pitch (rad), r: target pitch (rad), t: time (s).
  /// Returns the requested voltage.
  virtual double control(double y, double r, double t) = 0;

  virtual ControlDiagnostics diagnostics() const { return {}; }
};

using ControllerPtr = std::unique_ptr<Controller>;

/// Always requests zero volts; useful as an open-loop reference.
class ZeroController final : public Controller {
 public:
  explicit ZeroController(double period = 0.01) : period_(period) {}
  std::string name() const override { return "zero"; }
  double period() const override { return period_; }
  void reset() override {}
  double control(double, double, double) override { return 0.0; }

 private:
  double period_;
};

}  // namespace aero
