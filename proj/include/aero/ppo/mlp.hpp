#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "aero/kernels.hpp"

namespace aero::ppo {

/// Fully connected network with tanh hidden layers and a linear output.
/// The object only describes the architecture; parameters live in a flat
/// caller-owned span laid out layer by layer as [W (out x in), b (out)].
class Mlp {
 public:
  struct Layer {
    std::size_t in, out;
    std::size_t w_offset, b_offset;
  };

  /// Activations kept by forward() for backward().
  struct Cache {
    std::size_t batch = 0;
    std::vector<std::vector<double>> acts;  // acts[0] = input, acts.back() = output
  };

  explicit Mlp(std::vector<std::size_t> sizes);

  const std::vector<std::size_t>& sizes() const { return sizes_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t num_params() const { return num_params_; }
  std::size_t input_size() const { return sizes_.front(); }
  std::size_t output_size() const { return sizes_.back(); }

  void forward(std::span<const double> params, std::span<const double> x,
               std::size_t batch, Cache& cache,
               kernels::Backend backend = kernels::Backend::serial) const;

  /// Accumulates dLoss/dparams into `grad` given dLoss/doutput.
  void backward(std::span<const double> params, const Cache& cache,
                std::span<const double> d_out, std::span<double> grad,
                kernels::Backend backend = kernels::Backend::serial) const;

  /// Single-sample evaluation; returns the first output.
  double evaluate(std::span<const double> params, std::span<const double> x) const;

  /// Orthogonal weights scaled by `hidden_gain` (hidden layers) and
  /// `output_gain` (last layer); zero biases.
  void init_orthogonal(std::span<double> params, std::mt19937_64& rng,
                       double hidden_gain, double output_gain) const;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<Layer> layers_;
  std::size_t num_params_ = 0;
};

}  // namespace aero::ppo
