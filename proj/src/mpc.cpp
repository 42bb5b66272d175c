#include "aero/mpc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "aero/errors.hpp"
#include "aero/numerics/linalg.hpp"
#include "aero/numerics/riccati.hpp"

namespace aero::mpc {

void MpcConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError("mpc: " + m); };
  if (horizon < 2) fail("horizon must be at least 2");
  if (!(ts > 0.0)) fail("sampling period must be positive");
  if (q.rows() != 2 || q.cols() != 2) fail("Q must be 2x2");
  if (!num::is_positive_semidefinite(q)) fail("Q must be symmetric PSD");
  if (!(r > 0.0)) fail("R must be positive");
  if (!(u_limit > 0.0)) fail("u_limit must be positive");
  if (observer_poles.size() != 3) fail("exactly three observer poles are required");
  if (!(qp_tol > 0.0) || qp_max_iter < 1) fail("invalid QP tolerance/iteration cap");
}

AugmentedModel augment(const DiscreteModel& model) {
  num::require_shape(model.ad.rows() == 2 && model.bd.size() == 2 && model.cd.size() == 2,
                     "MPC expects the two-state pitch model");
  AugmentedModel aug{num::Matrix(3, 3), num::Vector(3), num::Vector(3)};
  aug.a.set_block(0, 0, model.ad);
  aug.a(2, 2) = 1.0;  // b_D = 0: disturbance does not enter the dynamics
  aug.b[0] = model.bd[0];
  aug.b[1] = model.bd[1];
  aug.c[0] = model.cd[0];
  aug.c[1] = model.cd[1];
  aug.c[2] = 1.0;  // c_D = 1: disturbance acts on the output
  return aug;
}

num::Vector design_observer(const num::Matrix& a, const num::Vector& c,
                            const std::vector<double>& poles) {
  const std::size_t n = a.rows();
  num::require_shape(a.square() && c.size() == n && poles.size() == n,
                     "observer design operands");
  for (double p : poles)
    if (!(std::abs(p) < 1.0))
      throw SynthesisError("observer: requested pole outside the unit disc");

  // Observability matrix O = [cᵀ; cᵀA; ...; cᵀA^{n−1}].
  num::Matrix obs(n, n);
  num::Vector row = c;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) obs(i, j) = row[j];
    row = num::left_multiply(row, a);
  }
  std::vector<std::complex<double>> roots(poles.begin(), poles.end());
  const num::Matrix phi = num::polynomial_at(num::polynomial_from_roots(roots), a);
  num::Vector e_last = num::Vector::unit(n, n - 1);
  try {
    return phi * num::solve(obs, e_last);
  } catch (const NumericalError&) {
    throw SynthesisError("observer: (A, c) is not observable");
  }
}

ObserverState observer_update(const ObserverState& obs, double u, double y,
                              const AugmentedModel& aug) {
  const double innovation = y - num::dot(aug.c, obs.x_hat);
  ObserverState next = obs;
  next.x_hat = aug.a * obs.x_hat + u * aug.b + innovation * obs.k_l;
  return next;
}

SteadyState steady_state_target(double r, double d_hat, const DiscreteModel& model) {
  num::Matrix m(3, 3);
  m.set_block(0, 0, num::Matrix::identity(2) - model.ad);
  m(0, 2) = -model.bd[0];
  m(1, 2) = -model.bd[1];
  m(2, 0) = model.cd[0];
  m(2, 1) = model.cd[1];
  num::Vector sol;
  try {
    sol = num::solve(m, num::Vector{0.0, 0.0, r - d_hat});
  } catch (const NumericalError&) {
    throw TargetError("steady-state target matrix is singular");
  }
  return {num::Vector{sol[0], sol[1]}, sol[2]};
}

MpcProblem::MpcProblem(DiscreteModel model, MpcConfig config)
    : model_(std::move(model)), config_(std::move(config)) {
  config_.validate();
  augmented_ = augment(model_);

  const num::Matrix b = num::Matrix::column(model_.bd);
  const auto dare = num::solve_dare(model_.ad, b, config_.q, num::Matrix{{config_.r}});
  terminal_ = dare.p;
  terminal_gain_ = dare.k;
  dare_residual_ = dare.residual;

  const std::size_t n = static_cast<std::size_t>(config_.horizon);
  // Γ (2N x N): δx_{i+1} = Σ_{j<=i} Ad^{i−j} bd δu_j ;  Φ (2N x 2): Ad^{i+1}.
  num::Matrix gamma(2 * n, n), phi(2 * n, 2);
  std::vector<num::Vector> impulse(n);  // Ad^k bd
  impulse[0] = model_.bd;
  for (std::size_t k = 1; k < n; ++k) impulse[k] = model_.ad * impulse[k - 1];
  num::Matrix power = model_.ad;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      gamma(2 * i, j) = impulse[i - j][0];
      gamma(2 * i + 1, j) = impulse[i - j][1];
    }
    phi.set_block(2 * i, 0, power);
    power = model_.ad * power;
  }
  // Q̄ Γ and Q̄ Φ with the terminal block weighted Q + P.
  num::Matrix qgamma(2 * n, n), qphi(2 * n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    num::Matrix w = config_.q;
    if (i + 1 == n) w += terminal_;
    qgamma.set_block(2 * i, 0, w * gamma.block(2 * i, 0, 2, n));
    qphi.set_block(2 * i, 0, w * phi.block(2 * i, 0, 2, 2));
  }
  const num::Matrix gt = gamma.transposed();
  h_ = (1.0 / config_.r) * (gt * qgamma) + num::Matrix::identity(n);
  h_ = num::symmetrized(h_);
  f_map_ = (1.0 / config_.r) * (gt * qphi);
  lipschitz_ = 1.01 * num::largest_eigenvalue_psd(h_);

  k_l_ = design_observer(augmented_.a, augmented_.c, config_.observer_poles);
}

num::BoxQp MpcProblem::build_qp(const num::Vector& dx0, double u_ss) const {
  const std::size_t n = static_cast<std::size_t>(config_.horizon);
  num::BoxQp qp{h_, f_map_ * dx0, num::Vector(n, -config_.u_limit - u_ss),
                num::Vector(n, config_.u_limit - u_ss)};
  return qp;
}

MpcStepResult mpc_step(const ObserverState& obs, const SteadyState& target,
                       const MpcProblem& problem,
                       const std::optional<num::Vector>& warm_start) {
  const num::Vector dx0{obs.x_hat[0] - target.x_ss[0], obs.x_hat[1] - target.x_ss[1]};
  const num::BoxQp qp = problem.build_qp(dx0, target.u_ss);
  num::QpOptions opts;
  opts.tol = problem.config().qp_tol;
  opts.max_iter = problem.config().qp_max_iter;
  opts.lipschitz = problem.lipschitz();
  auto sol = num::solve_box_qp(qp, opts, warm_start);

  MpcStepResult out;
  out.u = std::clamp(target.u_ss + sol.z[0], -problem.config().u_limit,
                     problem.config().u_limit);
  out.qp_iterations = sol.iterations;
  out.qp_converged = sol.converged;
  out.target = target;
  out.du = std::move(sol.z);
  return out;
}

MpcStepResult mpc_step(const ObserverState& obs, double r, const MpcProblem& problem,
                       const std::optional<num::Vector>& warm_start) {
  return mpc_step(obs, steady_state_target(r, obs.x_hat[2], problem.model()), problem,
                  warm_start);
}

MpcController::MpcController(const LinearModel& model, MpcConfig config, bool keep_log)
    : problem_(discretize(model, config.ts), config), keep_log_(keep_log) {
  reset();
}

void MpcController::reset() {
  observer_ = {num::Vector(3), problem_.observer_gain()};
  last_u_.reset();
  last_y_.reset();
  last_target_.reset();
  last_solution_.reset();
  diag_ = {};
  log_.clear();
  qp_failures_ = 0;
  target_failures_ = 0;
}

double MpcController::control(double y, double r, double t) {
  const auto start = std::chrono::steady_clock::now();
  if (last_u_ && last_y_)
    observer_ = observer_update(observer_, *last_u_, *last_y_, problem_.augmented());

  SteadyState target;
  try {
    target = steady_state_target(r, observer_.x_hat[2], problem_.model());
    last_target_ = target;
  } catch (const TargetError&) {
    ++target_failures_;
    target = last_target_.value_or(SteadyState{num::Vector(2), 0.0});
  }

  std::optional<num::Vector> warm;
  if (last_solution_) {
    const std::size_t n = last_solution_->size();
    num::Vector w(n);
    for (std::size_t i = 0; i < n; ++i)
      w[i] = (*last_solution_)[std::min(i + 1, n - 1)] - target.u_ss;
    warm = std::move(w);
  }

  const MpcStepResult step = mpc_step(observer_, target, problem_, warm);
  num::Vector absolute = step.du;
  for (auto& v : absolute) v += target.u_ss;
  last_solution_ = std::move(absolute);

  diag_ = {step.qp_iterations, !step.qp_converged};
  if (!step.qp_converged) ++qp_failures_;
  last_u_ = step.u;
  last_y_ = y;

  if (keep_log_) {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log_.push_back({t, r, y, observer_.x_hat[0], observer_.x_hat[1], observer_.x_hat[2],
                    step.u, step.qp_iterations, elapsed});
  }
  return step.u;
}

}  // namespace aero::mpc
