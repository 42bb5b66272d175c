#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "aero/errors.hpp"
#include "aero/model.hpp"
#include "aero/sysid.hpp"
#include "aero/units.hpp"

using namespace aero;
using namespace aero::sysid;

namespace {

const PlantParams kTrue{};

PlantParams guess() {
  PlantParams p;
  p.c_theta *= 1.2;
  p.c_omega *= 0.8;
  p.c_u *= 1.2;
  return p;
}

const IdentDataset& reference_data() {
  static const IdentDataset data = generate_test_sequence(kTrue, 0);
  return data;
}

}  // namespace

TEST(Sequence, ShapeAndAmplitudes) {
  const auto& d = reference_data();
  EXPECT_EQ(d.size(), 12000u);
  EXPECT_NEAR(d.sample_period(), 0.01, 1e-12);
  EXPECT_NO_THROW(d.validate());
  // The nominal profile is the six amplitudes in order, 20 s each.
  const SequenceOptions opts;
  std::vector<double> seen;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double nominal = opts.amplitudes[static_cast<std::size_t>(d.t[k] / 20.0 + 1e-9)];
    if (seen.empty() || seen.back() != nominal) seen.push_back(nominal);
  }
  EXPECT_EQ(seen, opts.amplitudes);
}

TEST(Sequence, ZeroSegmentStaysAtRest) {
  const auto& d = reference_data();
  for (std::size_t k = 0; k < 2000; ++k) {
    EXPECT_EQ(d.theta[k], 0.0);
    EXPECT_EQ(d.omega[k], 0.0);
    EXPECT_EQ(d.u[k], 0.0);
  }
}

TEST(Sequence, SafetyOnlyInsideTriggerBand) {
  // 9 V holds the beam past the trigger band, so the override must fire.
  SequenceOptions opts;
  opts.amplitudes = {0.0, 4.5, 9.0};
  const auto d = generate_test_sequence(kTrue, 0, opts);
  const double trigger = kTrue.theta_limit - kTrue.safety_band;
  int overrides = 0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double nominal = opts.amplitudes[static_cast<std::size_t>(d.t[k] / 20.0 + 1e-9)];
    if (d.u[k] != nominal) {
      ++overrides;
      EXPECT_GE(std::abs(d.theta[k]), trigger - 1e-12) << "t = " << d.t[k];
      EXPECT_EQ(std::abs(d.u[k]), kTrue.safety_voltage);
    }
    EXPECT_LE(std::abs(d.theta[k]), kTrue.theta_limit);
  }
  EXPECT_GT(overrides, 0);
}

TEST(Sequence, DefaultProfileStaysClearOfSafety) {
  const auto& d = reference_data();
  const double trigger = kTrue.theta_limit - kTrue.safety_band;
  for (double th : d.theta) EXPECT_LT(std::abs(th), trigger);
}

TEST(Objective, ZeroDataZeroCost) {
  IdentDataset d;
  for (int k = 0; k < 100; ++k) {
    d.t.push_back(0.01 * k);
    d.u.push_back(0.0);
    d.theta.push_back(0.0);
    d.omega.push_back(0.0);
  }
  EXPECT_EQ(objective(d, kTrue), 0.0);
}

TEST(Objective, InvalidParametersAreInfinite) {
  PlantParams p;
  p.c_u = -1.0;
  EXPECT_TRUE(std::isinf(objective(reference_data(), p)));
}

TEST(Objective, SmallAtGeneratingParameters) {
  const double at_truth = objective(reference_data(), kTrue);
  const double at_guess = objective(reference_data(), guess());
  EXPECT_LT(at_truth, 1e-3 * at_guess);
}

TEST(Fit, RecoversGeneratingCoefficients) {
  const auto r = fit(reference_data(), guess());
  EXPECT_NEAR(r.params.c_theta, kTrue.c_theta, 0.01 * kTrue.c_theta);
  EXPECT_NEAR(r.params.c_omega, kTrue.c_omega, 0.01 * kTrue.c_omega);
  EXPECT_NEAR(r.params.c_u, kTrue.c_u, 0.01 * kTrue.c_u);
  EXPECT_LE(r.cost, r.initial_cost);
  EXPECT_EQ(r.start_costs.size(), 5u);

  // Linearization entries follow.
  const auto a = linearize(r.params);
  EXPECT_NEAR(a.a(1, 0), -0.8185, 0.01 * 0.8185);
  EXPECT_NEAR(a.a(1, 1), -0.0503, 0.01 * 0.0503);
  EXPECT_NEAR(a.b[1], 0.0682, 0.01 * 0.0682);
}

TEST(Fit, QuantizedNoisyDataStaysClose) {
  SequenceOptions opts;
  opts.quantize = true;
  opts.noise_std = deg_to_rad(0.05);
  const auto data = generate_test_sequence(kTrue, 3, opts);
  FitOptions fo;
  fo.restarts = 3;
  const auto r = fit(data, guess(), fo);
  EXPECT_NEAR(r.params.c_theta, kTrue.c_theta, 0.03 * kTrue.c_theta);
  EXPECT_NEAR(r.params.c_u, kTrue.c_u, 0.03 * kTrue.c_u);
  EXPECT_LE(r.cost, r.initial_cost);
}

TEST(Fit, DeterministicAndThreadIndependent) {
  FitOptions fo;
  fo.restarts = 3;
  fo.max_evaluations = 150;
  fo.seed = 17;
  fo.parallel = true;
  const auto a = fit(reference_data(), guess(), fo);
  const auto b = fit(reference_data(), guess(), fo);
  fo.parallel = false;
  const auto c = fit(reference_data(), guess(), fo);
  EXPECT_EQ(a.params.c_theta, b.params.c_theta);
  EXPECT_EQ(a.params.c_u, b.params.c_u);
  EXPECT_EQ(a.params.c_theta, c.params.c_theta);
  EXPECT_EQ(a.params.c_omega, c.params.c_omega);
  EXPECT_EQ(a.cost, c.cost);
}

// Monotone improvement from arbitrary starting guesses.
TEST(Fit, NeverWorseThanInitialGuess) {
  FitOptions fo;
  fo.restarts = 2;
  fo.max_evaluations = 200;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> scale(0.5, 1.5);
  for (int trial = 0; trial < 4; ++trial) {
    PlantParams p;
    p.c_theta *= scale(rng);
    p.c_omega *= scale(rng);
    p.c_u *= scale(rng);
    const auto r = fit(reference_data(), p, fo);
    EXPECT_LE(r.cost, objective(reference_data(), p, fo.substeps));
  }
}

TEST(Csv, RoundTripIsExact) {
  const auto& d = reference_data();
  std::stringstream ss;
  write_csv(ss, d);
  const auto back = read_csv(ss);
  EXPECT_EQ(back.t, d.t);
  EXPECT_EQ(back.u, d.u);
  EXPECT_EQ(back.theta, d.theta);
  EXPECT_EQ(back.omega, d.omega);
}

TEST(Csv, RejectsMalformedInput) {
  std::istringstream bad_header("time,u,theta,omega\n0,0,0,0\n");
  EXPECT_THROW(read_csv(bad_header), ConfigError);
  std::istringstream ragged("t,u,theta,omega\n0,0,0\n");
  EXPECT_THROW(read_csv(ragged), ConfigError);
  std::istringstream junk("t,u,theta,omega\n0,abc,0,0\n");
  EXPECT_THROW(read_csv(junk), ConfigError);
}

TEST(Dataset, ValidationCatchesNonUniformTime) {
  IdentDataset d;
  d.t = {0.0, 0.01, 0.03};
  d.u = d.theta = d.omega = {0.0, 0.0, 0.0};
  EXPECT_THROW(d.validate(), ConfigError);
}
