#include "aero/ppo/mlp.hpp"

#include <cmath>

#include "aero/errors.hpp"
#include "aero/numerics/matrix.hpp"

namespace aero::ppo {

Mlp::Mlp(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw DimensionError("Mlp needs at least input and output sizes");
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    Layer layer{sizes_[l], sizes_[l + 1], offset, offset + sizes_[l] * sizes_[l + 1]};
    offset = layer.b_offset + layer.out;
    layers_.push_back(layer);
  }
  num_params_ = offset;
}

void Mlp::forward(std::span<const double> params, std::span<const double> x,
                  std::size_t batch, Cache& cache, kernels::Backend backend) const {
  num::require_shape(params.size() == num_params_, "Mlp parameter count");
  num::require_shape(x.size() == batch * input_size(), "Mlp input batch");
  cache.batch = batch;
  cache.acts.resize(layers_.size() + 1);
  cache.acts[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& L = layers_[l];
    auto& out = cache.acts[l + 1];
    out.resize(batch * L.out);
    kernels::dense_forward(backend, params.subspan(L.w_offset, L.in * L.out),
                           params.subspan(L.b_offset, L.out), cache.acts[l], out,
                           {batch, L.in, L.out});
    if (l + 1 < layers_.size()) kernels::tanh_inplace(backend, out);
  }
}

void Mlp::backward(std::span<const double> params, const Cache& cache,
                   std::span<const double> d_out, std::span<double> grad,
                   kernels::Backend backend) const {
  num::require_shape(grad.size() == num_params_, "Mlp gradient size");
  num::require_shape(d_out.size() == cache.batch * output_size(), "Mlp output gradient");
  const std::size_t batch = cache.batch;
  std::vector<double> delta(d_out.begin(), d_out.end());
  std::vector<double> upstream;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const Layer& L = layers_[l];
    const kernels::DenseShape shape{batch, L.in, L.out};
    kernels::dense_backward_params(backend, delta, cache.acts[l],
                                   grad.subspan(L.w_offset, L.in * L.out),
                                   grad.subspan(L.b_offset, L.out), shape);
    if (l == 0) break;
    upstream.resize(batch * L.in);
    kernels::dense_backward_input(backend, delta, params.subspan(L.w_offset, L.in * L.out),
                                  upstream, shape);
    // Through tanh: d/dz tanh(z) = 1 − tanh²(z).
    const auto& a = cache.acts[l];
    for (std::size_t i = 0; i < upstream.size(); ++i) upstream[i] *= 1.0 - a[i] * a[i];
    delta.swap(upstream);
  }
}

double Mlp::evaluate(std::span<const double> params, std::span<const double> x) const {
  num::require_shape(x.size() == input_size(), "Mlp single input");
  std::vector<double> cur(x.begin(), x.end()), next;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& L = layers_[l];
    next.resize(L.out);
    kernels::serial::dense_forward(params.subspan(L.w_offset, L.in * L.out),
                                   params.subspan(L.b_offset, L.out), cur, next,
                                   {1, L.in, L.out});
    if (l + 1 < layers_.size())
      for (auto& v : next) v = std::tanh(v);
    cur.swap(next);
  }
  return cur[0];
}

void Mlp::init_orthogonal(std::span<double> params, std::mt19937_64& rng,
                          double hidden_gain, double output_gain) const {
  num::require_shape(params.size() == num_params_, "Mlp parameter count");
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& L = layers_[l];
    const double gain = (l + 1 == layers_.size()) ? output_gain : hidden_gain;
    // Orthonormalize along the shorter dimension with modified Gram-Schmidt.
    const bool by_rows = L.out <= L.in;
    const std::size_t count = by_rows ? L.out : L.in;
    const std::size_t length = by_rows ? L.in : L.out;
    std::vector<std::vector<double>> vecs(count, std::vector<double>(length));
    for (auto& v : vecs)
      for (auto& e : v) e = normal(rng);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        double d = 0.0;
        for (std::size_t k = 0; k < length; ++k) d += vecs[i][k] * vecs[j][k];
        for (std::size_t k = 0; k < length; ++k) vecs[i][k] -= d * vecs[j][k];
      }
      double n = 0.0;
      for (double e : vecs[i]) n += e * e;
      n = std::sqrt(n);
      for (auto& e : vecs[i]) e /= n;
    }
    for (std::size_t o = 0; o < L.out; ++o)
      for (std::size_t i = 0; i < L.in; ++i)
        params[L.w_offset + o * L.in + i] = gain * (by_rows ? vecs[o][i] : vecs[i][o]);
    for (std::size_t o = 0; o < L.out; ++o) params[L.b_offset + o] = 0.0;
  }
}

}  // namespace aero::ppo
