#pragma once

// Identification of the composite plant coefficients (c_theta, c_omega, c_u)
// from a recorded input/output sequence by least absolute error between the
// measured and re-simulated trajectories.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "aero/plant.hpp"

namespace aero::sysid {

/// Uniformly sampled record. u is the voltage actually applied and held over
/// each sample interval; theta in rad, omega in rad/s.
struct IdentDataset {
  std::vector<double> t, u, theta, omega;

  std::size_t size() const { return t.size(); }
  double sample_period() const;
  /// Throws ConfigError on ragged columns, non-uniform time or non-finite data.
  void validate() const;
};

struct SequenceOptions {
  std::vector<double> amplitudes{0.0, 1.5, 3.0, 4.5, 6.0, 7.5};  // V, in order
  double segment_duration = 20.0;  // s per amplitude
  double sample_period = 0.01;     // s
  double dt = 1e-3;                // integration step, s
  bool quantize = false;
  double noise_std = 0.0;          // rad, added to theta before quantization
  bool safety_enabled = true;
};

/// Simulates the step-amplitude sequence from rest. The safety override is
/// evaluated once per sample so the recorded u is exactly what the plant saw.
IdentDataset generate_test_sequence(const PlantParams& params, std::uint64_t seed,
                                    const SequenceOptions& options = {});

struct FitOptions {
  int restarts = 5;            // number of Nelder-Mead starts (first one unperturbed)
  double perturbation = 0.3;   // relative spread of the perturbed starts
  int max_evaluations = 4000;  // per start
  double tolerance = 1e-9;     // relative simplex size for termination
  int substeps = 2;            // integration steps per sample in re-simulation
  std::uint64_t seed = 0;
  bool parallel = true;        // run starts on OpenMP threads
};

struct FitResult {
  PlantParams params;
  double cost = 0.0;
  double initial_cost = 0.0;
  int evaluations = 0;
  std::vector<double> start_costs;  // best cost reached from each start
};

/// Σ_k |θ_k − θ_sim,k| + |ω_k − ω_sim,k|, re-simulating from the first
/// sample under the recorded inputs. +∞ when the parameters are invalid or
/// the simulation diverges.
double objective(const IdentDataset& data, const PlantParams& params, int substeps = 2);

/// Multi-start Nelder–Mead over (c_theta, c_omega, c_u). Other fields of
/// init_guess (limits, imbalance) are kept fixed. Deterministic given
/// (data, init_guess, options).
FitResult fit(const IdentDataset& data, const PlantParams& init_guess,
              const FitOptions& options = {});

void write_csv(std::ostream& os, const IdentDataset& data);
IdentDataset read_csv(std::istream& is);
void save_csv(const std::filesystem::path& path, const IdentDataset& data);
IdentDataset load_csv(const std::filesystem::path& path);

}  // namespace aero::sysid
