#pragma once

// Dense-layer kernels for batched network evaluation.
//
// Each kernel exists twice: a serial reference and an OpenMP version. The
// parallel versions split work over independent output elements only and
// keep the per-element accumulation order of the serial code, so the two
// are bitwise identical for any thread count. Tests rely on that.
//
// Layouts are row-major: W is out x in, X is batch x in, Y is batch x out.

#include <cstddef>
#include <span>

namespace aero::kernels {

enum class Backend { serial, parallel };

struct DenseShape {
  std::size_t batch;
  std::size_t in;
  std::size_t out;
};

namespace serial {
/// Y = X Wᵀ + 1 biasᵀ
void dense_forward(std::span<const double> w, std::span<const double> bias,
                   std::span<const double> x, std::span<double> y, DenseShape s);
/// dW += dYᵀ X ; dbias += column sums of dY
void dense_backward_params(std::span<const double> dy, std::span<const double> x,
                           std::span<double> dw, std::span<double> dbias, DenseShape s);
/// dX = dY W
void dense_backward_input(std::span<const double> dy, std::span<const double> w,
                          std::span<double> dx, DenseShape s);
void tanh_inplace(std::span<double> v);
}  // namespace serial

namespace parallel {
void dense_forward(std::span<const double> w, std::span<const double> bias,
                   std::span<const double> x, std::span<double> y, DenseShape s);
void dense_backward_params(std::span<const double> dy, std::span<const double> x,
                           std::span<double> dw, std::span<double> dbias, DenseShape s);
void dense_backward_input(std::span<const double> dy, std::span<const double> w,
                          std::span<double> dx, DenseShape s);
void tanh_inplace(std::span<double> v);
}  // namespace parallel

void dense_forward(Backend b, std::span<const double> w, std::span<const double> bias,
                   std::span<const double> x, std::span<double> y, DenseShape s);
void dense_backward_params(Backend b, std::span<const double> dy,
                           std::span<const double> x, std::span<double> dw,
                           std::span<double> dbias, DenseShape s);
void dense_backward_input(Backend b, std::span<const double> dy,
                          std::span<const double> w, std::span<double> dx, DenseShape s);
void tanh_inplace(Backend b, std::span<double> v);

/// Threads OpenMP would use for a parallel region (1 without OpenMP).
int max_threads();

}  // namespace aero::kernels
