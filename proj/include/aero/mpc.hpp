#pragma once

// Offset-free linear MPC.
//
// The sampled model is augmented with an integrating output disturbance d,
//
//   x̃[k+1] = [[Ad, 0], [0, 1]] x̃[k] + [bd; 0] u[k],   y[k] = [cdᵀ, 1] x̃[k],
//
// a Luenberger observer estimates x̃, the pair (x_ss, u_ss) that puts the
// model output at r − d̂ is solved each sample, and a box-constrained
// finite-horizon LQ problem in deviation variables is condensed to a QP over
// the N future inputs.

#include <optional>
#include <vector>

#include "aero/controller.hpp"
#include "aero/model.hpp"
#include "aero/numerics/box_qp.hpp"
#include "aero/numerics/matrix.hpp"

namespace aero::mpc {

struct MpcConfig {
  int horizon = 60;
  double ts = 0.02;
  num::Matrix q = num::Matrix::diagonal({10.0, 1.0});
  double r = 0.01;
  double u_limit = 24.0;
  std::vector<double> observer_poles{0.80, 0.85, 0.90};
  double qp_tol = 1e-6;
  int qp_max_iter = 400;

  void validate() const;
  double prediction_time() const { return horizon * ts; }
};

struct AugmentedModel {
  num::Matrix a;  // 3x3
  num::Vector b;  // 3
  num::Vector c;  // 3
};

AugmentedModel augment(const DiscreteModel& model);

/// Observer gain placing eig(A − k cᵀ) at `poles` (Ackermann's formula on
/// the dual system). Throws SynthesisError for an unobservable pair or a
/// pole outside the unit disc.
num::Vector design_observer(const num::Matrix& a, const num::Vector& c,
                            const std::vector<double>& poles);

struct ObserverState {
  num::Vector x_hat;  // (θ̂, ω̂, d̂)
  num::Vector k_l;
};

/// x̂ ← Ã x̂ + b̃ u + k_L (y − c̃ᵀ x̂)
ObserverState observer_update(const ObserverState& obs, double u, double y,
                              const AugmentedModel& aug);

struct SteadyState {
  num::Vector x_ss;
  double u_ss = 0.0;
};

/// Solve [[I − Ad, −bd], [cdᵀ, 0]] [x_ss; u_ss] = [0; r − d̂].
/// Throws TargetError when the block matrix is singular.
SteadyState steady_state_target(double r, double d_hat, const DiscreteModel& model);

/// Precomputed condensed prediction for one (model, config) pair.
///
/// Cost in deviation variables δx = x − x_ss, δu = u − u_ss:
///   Σ_{i=0}^{N−1} δx_{i+1}ᵀ Q δx_{i+1} + R δu_i²  +  δx_Nᵀ P δx_N
/// with P the DARE solution. The QP is stored divided by 2R, so that
/// H = I + ΓᵀQ̄Γ / R is unit-scaled in volts.
class MpcProblem {
 public:
  MpcProblem(DiscreteModel model, MpcConfig config);

  num::BoxQp build_qp(const num::Vector& dx0, double u_ss) const;

  const DiscreteModel& model() const { return model_; }
  const MpcConfig& config() const { return config_; }
  const AugmentedModel& augmented() const { return augmented_; }
  const num::Matrix& terminal_cost() const { return terminal_; }
  const num::Matrix& terminal_gain() const { return terminal_gain_; }
  double dare_residual() const { return dare_residual_; }
  const num::Matrix& hessian() const { return h_; }
  double lipschitz() const { return lipschitz_; }
  const num::Vector& observer_gain() const { return k_l_; }

 private:
  DiscreteModel model_;
  MpcConfig config_;
  AugmentedModel augmented_;
  num::Matrix terminal_;
  num::Matrix terminal_gain_;
  double dare_residual_ = 0.0;
  num::Matrix h_;       // N x N
  num::Matrix f_map_;   // N x 2, f = f_map · δx0
  double lipschitz_ = 0.0;
  num::Vector k_l_;
};

struct MpcStepResult {
  double u = 0.0;
  int qp_iterations = 0;
  bool qp_converged = true;
  SteadyState target;
  num::Vector du;  // optimal deviation sequence
};

/// Solve one receding-horizon problem from the observer estimate and
/// return the first input. `warm_start` is a deviation-variable guess.
MpcStepResult mpc_step(const ObserverState& obs, double r, const MpcProblem& problem,
                       const std::optional<num::Vector>& warm_start = std::nullopt);

/// Same as above with a caller-provided target (used when the target solve
/// failed and the previous target is held).
MpcStepResult mpc_step(const ObserverState& obs, const SteadyState& target,
                       const MpcProblem& problem,
                       const std::optional<num::Vector>& warm_start);

struct MpcLogRecord {
  double t, r, y;
  double theta_hat, omega_hat, d_hat;
  double u;
  int qp_iterations;
  double solve_time;  // s
};

class MpcController final : public Controller {
 public:
  MpcController(const LinearModel& model, MpcConfig config = {}, bool keep_log = false);

  std::string name() const override { return "mpc"; }
  double period() const override { return problem_.config().ts; }
  void reset() override;
  double control(double y, double r, double t) override;
  ControlDiagnostics diagnostics() const override { return diag_; }

  const MpcProblem& problem() const { return problem_; }
  const ObserverState& observer() const { return observer_; }
  const std::vector<MpcLogRecord>& log() const { return log_; }
  int qp_failures() const { return qp_failures_; }
  int target_failures() const { return target_failures_; }

 private:
  MpcProblem problem_;
  bool keep_log_;
  ObserverState observer_;
  std::optional<double> last_u_;
  std::optional<double> last_y_;
  std::optional<SteadyState> last_target_;
  std::optional<num::Vector> last_solution_;  // absolute inputs
  ControlDiagnostics diag_;
  std::vector<MpcLogRecord> log_;
  int qp_failures_ = 0;
  int target_failures_ = 0;
};

}  // namespace aero::mpc
