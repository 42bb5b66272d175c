#include <cmath>

#include <gtest/gtest.h>

#include "aero/bench/metrics.hpp"
#include "aero/bench/runner.hpp"
#include "aero/errors.hpp"
#include "aero/mpc.hpp"
#include "aero/numerics/linalg.hpp"
#include "aero/units.hpp"
#include "oracles/lq_recursion.hpp"

using namespace aero;
using namespace aero::mpc;

namespace {

const LinearModel kModel = linearize(PlantParams{});
const DiscreteModel kDiscrete = discretize(kModel, 0.02);

oracle::Mat to_oracle(const num::Matrix& m) {
  oracle::Mat o(m.rows(), oracle::Vec(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) o[i][j] = m(i, j);
  return o;
}

ObserverState exact_state(double theta, double omega, double d = 0.0) {
  return {num::Vector{theta, omega, d}, num::Vector(3)};
}

}  // namespace

TEST(MpcConfig, HorizonCoversOnePointTwoSeconds) {
  const MpcConfig cfg;
  EXPECT_EQ(cfg.horizon, 60);
  EXPECT_DOUBLE_EQ(cfg.ts, 0.02);
  EXPECT_NEAR(cfg.prediction_time(), 1.2, 1e-12);
}

TEST(Observer, ScalarPlacement) {
  const auto k = design_observer(num::Matrix{{1.0}}, num::Vector{1.0}, {0.5});
  EXPECT_NEAR(k[0], 0.5, 1e-12);
}

TEST(Observer, OpenLoopPolesGiveZeroGain) {
  const num::Matrix a{{0.9, 0.1}, {0.0, 0.7}};
  const auto k = design_observer(a, num::Vector{1.0, 0.0}, {0.9, 0.7});
  EXPECT_NEAR(k[0], 0.0, 1e-12);
  EXPECT_NEAR(k[1], 0.0, 1e-12);
}

TEST(Observer, DefaultPolesOnAugmentedModel) {
  const AugmentedModel aug = augment(kDiscrete);
  const auto k = design_observer(aug.a, aug.c, {0.80, 0.85, 0.90});
  const num::Matrix err = aug.a - num::outer(k, aug.c);
  EXPECT_LT(num::spectral_radius(err), 0.91);
  auto ev = num::eigenvalues(err);
  std::vector<double> re;
  for (const auto& z : ev) {
    EXPECT_NEAR(z.imag(), 0.0, 1e-8);
    re.push_back(z.real());
  }
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], 0.80, 1e-8);
  EXPECT_NEAR(re[1], 0.85, 1e-8);
  EXPECT_NEAR(re[2], 0.90, 1e-8);
}

TEST(Observer, RejectsBadRequests) {
  const AugmentedModel aug = augment(kDiscrete);
  EXPECT_THROW(design_observer(aug.a, aug.c, {0.8, 0.85, 1.1}), SynthesisError);
  // θ is invisible when only ω is measured... and the disturbance too.
  EXPECT_THROW(design_observer(num::Matrix{{1, 0}, {0, 1}}, num::Vector{1, 0}, {0.5, 0.6}),
               SynthesisError);
}

TEST(Observer, ZeroStaysZero) {
  const AugmentedModel aug = augment(kDiscrete);
  ObserverState obs{num::Vector(3), design_observer(aug.a, aug.c, {0.8, 0.85, 0.9})};
  for (int i = 0; i < 10; ++i) obs = observer_update(obs, 0.0, 0.0, aug);
  EXPECT_EQ(obs.x_hat, num::Vector(3));
}

TEST(Observer, ConvergesToOutputOffset) {
  const AugmentedModel aug = augment(kDiscrete);
  ObserverState obs{num::Vector(3), design_observer(aug.a, aug.c, {0.8, 0.85, 0.9})};
  const double offset = deg_to_rad(2.0);
  num::Vector x{0.0, 0.0};
  const int samples = static_cast<int>(3.0 / 0.02);
  for (int k = 0; k < samples; ++k) {
    const double u = 0.5 * std::sin(0.3 * k);
    const double y = x[0] + offset;
    obs = observer_update(obs, u, y, aug);
    x = kDiscrete.ad * x + kDiscrete.bd * u;
  }
  EXPECT_NEAR(obs.x_hat[2], offset, 0.02 * offset);
}

TEST(Observer, ErrorContractsGeometrically) {
  const AugmentedModel aug = augment(kDiscrete);
  ObserverState obs{num::Vector{0.1, -0.2, 0.05}, design_observer(aug.a, aug.c, {0.8, 0.85, 0.9})};
  num::Vector x{0.0, 0.0, 0.0};
  double first = 0.0, last = 0.0;
  const int n = 200;
  for (int k = 0; k < n; ++k) {
    const double u = std::cos(0.1 * k);
    obs = observer_update(obs, u, num::dot(aug.c, x), aug);
    x = aug.a * x + aug.b * u;
    const double e = num::norm_inf(obs.x_hat - x);
    if (k == 0) first = e;
    last = e;
  }
  // Asymptotic rate 0.9 per sample, with slack for the transient polynomial factor.
  EXPECT_LT(last, first * std::pow(0.9, n - 1) * 1e3);
  EXPECT_LT(last, 1e-7);
}

TEST(SteadyState, Examples) {
  const auto zero = steady_state_target(0.0, 0.0, kDiscrete);
  EXPECT_NEAR(zero.x_ss[0], 0.0, 1e-15);
  EXPECT_NEAR(zero.x_ss[1], 0.0, 1e-15);
  EXPECT_NEAR(zero.u_ss, 0.0, 1e-15);

  const double r = 0.08727;
  const auto five = steady_state_target(r, 0.0, kDiscrete);
  EXPECT_NEAR(five.x_ss[0], r, 1e-12);
  EXPECT_NEAR(five.x_ss[1], 0.0, 1e-12);
  EXPECT_NEAR(five.u_ss, 0.8185 * r / 0.0682, 0.01 * 1.047);

  const auto cancel = steady_state_target(0.3, 0.3, kDiscrete);
  EXPECT_NEAR(cancel.x_ss[0], 0.0, 1e-15);
  EXPECT_NEAR(cancel.u_ss, 0.0, 1e-15);
}

TEST(MpcStep, SteadyStateGivesSteadyInput) {
  const MpcProblem problem(kDiscrete, MpcConfig{});
  const double r = deg_to_rad(20.0);
  const auto target = steady_state_target(r, 0.0, kDiscrete);
  const auto out = mpc_step(exact_state(target.x_ss[0], target.x_ss[1]), r, problem);
  EXPECT_NEAR(out.u, target.u_ss, 1e-9);
}

TEST(MpcStep, SaturatesOnLargeError) {
  const MpcProblem problem(kDiscrete, MpcConfig{});
  EXPECT_EQ(mpc_step(exact_state(deg_to_rad(-40.0), -0.5), deg_to_rad(40.0), problem).u, 24.0);
  EXPECT_EQ(mpc_step(exact_state(deg_to_rad(40.0), 0.5), deg_to_rad(-40.0), problem).u, -24.0);
}

TEST(MpcStep, UnconstrainedMatchesDynamicProgramming) {
  MpcConfig cfg;
  cfg.qp_tol = 1e-12;
  cfg.qp_max_iter = 100000;
  const MpcProblem problem(kDiscrete, cfg);
  const auto k0 = oracle::lq_first_gain(to_oracle(kDiscrete.ad), kDiscrete.bd.values(),
                                        to_oracle(cfg.q), cfg.r, to_oracle(problem.terminal_cost()),
                                        cfg.horizon);
  for (const auto& [th, om] : std::vector<std::pair<double, double>>{{0.01, 0.0}, {-0.005, 0.02}, {0.0, -0.01}}) {
    const double expected = -(k0[0] * th + k0[1] * om);
    ASSERT_LT(std::abs(expected), 20.0);
    const auto out = mpc_step(exact_state(th, om), 0.0, problem);
    EXPECT_NEAR(out.u, expected, 1e-5);
  }
}

// Long horizon, inactive constraints: the receding-horizon loop reproduces the
// infinite-horizon LQ loop on the sampled model.
TEST(MpcStep, LongHorizonMatchesInfiniteHorizonLq) {
  MpcConfig cfg;
  cfg.horizon = 400;
  cfg.qp_tol = 1e-12;
  cfg.qp_max_iter = 100000;
  const MpcProblem problem(kDiscrete, cfg);
  const num::Matrix& k = problem.terminal_gain();
  num::Vector x_mpc{deg_to_rad(3.0), 0.0}, x_lq = x_mpc;
  double worst = 0.0;
  for (int i = 0; i < static_cast<int>(5.0 / cfg.ts); ++i) {
    const double u_mpc = mpc_step(exact_state(x_mpc[0], x_mpc[1]), 0.0, problem).u;
    const double u_lq = -(k(0, 0) * x_lq[0] + k(0, 1) * x_lq[1]);
    x_mpc = kDiscrete.ad * x_mpc + kDiscrete.bd * u_mpc;
    x_lq = kDiscrete.ad * x_lq + kDiscrete.bd * u_lq;
    worst = std::max(worst, std::abs(x_mpc[0] - x_lq[0]));
  }
  EXPECT_LT(worst, 1e-3);
}

TEST(MpcProblem, TerminalCostSolvesDare) {
  const MpcProblem problem(kDiscrete, MpcConfig{});
  EXPECT_LT(problem.dare_residual(), 1e-10);
  const num::Matrix closed = kDiscrete.ad - num::Matrix::column(kDiscrete.bd) * problem.terminal_gain();
  EXPECT_LT(num::spectral_radius(closed), 1.0);
  EXPECT_LT(num::asymmetry(problem.hessian()), 1e-12);
  EXPECT_TRUE(num::is_positive_definite(problem.hessian()));
}

TEST(MpcConfig, Validation) {
  MpcConfig cfg;
  cfg.horizon = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.r = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.observer_poles = {0.8, 0.9};
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(MpcClosedLoop, OffsetFreeUnderImbalance) {
  for (double target : {-30.0, 10.0, 25.0}) {
    for (double imbalance : {-0.1, 0.12}) {
      MpcController c(kModel);
      bench::Scenario s;
      s.name = "hold";
      s.profile.segments = {{0.0, target}};
      s.duration = 30.0;
      s.imbalance = imbalance;
      const auto run = bench::run_scenario(c, s, PlantConfig{}, 0);
      double worst = 0.0;
      for (std::size_t i = 0; i < run.trace.size(); ++i)
        if (run.trace.t[i] >= 28.0) worst = std::max(worst, std::abs(run.trace.y[i] - target));
      EXPECT_LT(worst, 0.25) << target << " / " << imbalance;
      EXPECT_EQ(run.stats.qp_failures, 0);
    }
  }
}

TEST(MpcClosedLoop, StepSettlesWithinQuantization) {
  MpcController c(kModel);
  const auto run = bench::run_scenario(c, bench::step_scenario(20.0), PlantConfig{}, 0);
  const auto m = bench::step_metrics(run.trace, 20.0);
  EXPECT_LE(std::abs(m.e_inf), 0.2);
  EXPECT_LT(m.m_p, 10.0);
}

TEST(MpcController, OutputsWithinLimits) {
  MpcController c(kModel);
  const auto run = bench::run_scenario(c, bench::sequence_scenario(), PlantConfig{}, 0);
  for (double u : run.trace.u) ASSERT_LE(std::abs(u), 24.0);
}
