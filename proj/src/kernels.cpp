#include "aero/kernels.hpp"

#include <cmath>

#include "aero/numerics/matrix.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace aero::kernels {

namespace {
void check(std::size_t have, std::size_t need, const char* what) {
  num::require_shape(have >= need, what);
}

void check_forward(std::span<const double> w, std::span<const double> bias,
                   std::span<const double> x, std::span<double> y, DenseShape s) {
  check(w.size(), s.out * s.in, "dense W");
  check(bias.size(), s.out, "dense bias");
  check(x.size(), s.batch * s.in, "dense X");
  check(y.size(), s.batch * s.out, "dense Y");
}

void check_params(std::span<const double> dy, std::span<const double> x,
                  std::span<double> dw, std::span<double> dbias, DenseShape s) {
  check(dy.size(), s.batch * s.out, "dense dY");
  check(x.size(), s.batch * s.in, "dense X");
  check(dw.size(), s.out * s.in, "dense dW");
  check(dbias.size(), s.out, "dense dbias");
}

void check_input(std::span<const double> dy, std::span<const double> w,
                 std::span<double> dx, DenseShape s) {
  check(dy.size(), s.batch * s.out, "dense dY");
  check(w.size(), s.out * s.in, "dense W");
  check(dx.size(), s.batch * s.in, "dense dX");
}

// Row kernels shared by both backends so the arithmetic is identical.
inline void forward_row(const double* w, const double* bias, const double* xr, double* yr,
                        std::size_t in, std::size_t out) {
  for (std::size_t o = 0; o < out; ++o) {
    const double* wr = w + o * in;
    double acc = bias[o];
    for (std::size_t i = 0; i < in; ++i) acc += wr[i] * xr[i];
    yr[o] = acc;
  }
}

inline void params_row(const double* dy, const double* x, double* dw, double* dbias,
                       std::size_t o, DenseShape s) {
  double* dwr = dw + o * s.in;
  double db = 0.0;
  for (std::size_t b = 0; b < s.batch; ++b) {
    const double g = dy[b * s.out + o];
    db += g;
    if (g == 0.0) continue;
    const double* xr = x + b * s.in;
    for (std::size_t i = 0; i < s.in; ++i) dwr[i] += g * xr[i];
  }
  dbias[o] += db;
}

inline void input_row(const double* dyr, const double* w, double* dxr, DenseShape s) {
  for (std::size_t i = 0; i < s.in; ++i) dxr[i] = 0.0;
  for (std::size_t o = 0; o < s.out; ++o) {
    const double g = dyr[o];
    if (g == 0.0) continue;
    const double* wr = w + o * s.in;
    for (std::size_t i = 0; i < s.in; ++i) dxr[i] += g * wr[i];
  }
}
}  // namespace

namespace serial {

void dense_forward(std::span<const double> w, std::span<const double> bias,
                   std::span<const double> x, std::span<double> y, DenseShape s) {
  check_forward(w, bias, x, y, s);
  for (std::size_t b = 0; b < s.batch; ++b)
    forward_row(w.data(), bias.data(), x.data() + b * s.in, y.data() + b * s.out, s.in, s.out);
}

void dense_backward_params(std::span<const double> dy, std::span<const double> x,
                           std::span<double> dw, std::span<double> dbias, DenseShape s) {
  check_params(dy, x, dw, dbias, s);
  for (std::size_t o = 0; o < s.out; ++o)
    params_row(dy.data(), x.data(), dw.data(), dbias.data(), o, s);
}

void dense_backward_input(std::span<const double> dy, std::span<const double> w,
                          std::span<double> dx, DenseShape s) {
  check_input(dy, w, dx, s);
  for (std::size_t b = 0; b < s.batch; ++b)
    input_row(dy.data() + b * s.out, w.data(), dx.data() + b * s.in, s);
}

void tanh_inplace(std::span<double> v) {
  for (auto& x : v) x = std::tanh(x);
}

}  // namespace serial

namespace parallel {

void dense_forward(std::span<const double> w, std::span<const double> bias,
                   std::span<const double> x, std::span<double> y, DenseShape s) {
  check_forward(w, bias, x, y, s);
  const auto batch = static_cast<long>(s.batch);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < batch; ++b)
    forward_row(w.data(), bias.data(), x.data() + b * s.in, y.data() + b * s.out, s.in, s.out);
}

void dense_backward_params(std::span<const double> dy, std::span<const double> x,
                           std::span<double> dw, std::span<double> dbias, DenseShape s) {
  check_params(dy, x, dw, dbias, s);
  const auto out = static_cast<long>(s.out);
#pragma omp parallel for schedule(static)
  for (long o = 0; o < out; ++o)
    params_row(dy.data(), x.data(), dw.data(), dbias.data(), static_cast<std::size_t>(o), s);
}

void dense_backward_input(std::span<const double> dy, std::span<const double> w,
                          std::span<double> dx, DenseShape s) {
  check_input(dy, w, dx, s);
  const auto batch = static_cast<long>(s.batch);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < batch; ++b)
    input_row(dy.data() + b * s.out, w.data(), dx.data() + b * s.in, s);
}

void tanh_inplace(std::span<double> v) {
  const auto n = static_cast<long>(v.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) v[i] = std::tanh(v[i]);
}

}  // namespace parallel

void dense_forward(Backend b, std::span<const double> w, std::span<const double> bias,
                   std::span<const double> x, std::span<double> y, DenseShape s) {
  b == Backend::parallel ? parallel::dense_forward(w, bias, x, y, s)
                         : serial::dense_forward(w, bias, x, y, s);
}

void dense_backward_params(Backend b, std::span<const double> dy,
                           std::span<const double> x, std::span<double> dw,
                           std::span<double> dbias, DenseShape s) {
  b == Backend::parallel ? parallel::dense_backward_params(dy, x, dw, dbias, s)
                         : serial::dense_backward_params(dy, x, dw, dbias, s);
}

void dense_backward_input(Backend b, std::span<const double> dy,
                          std::span<const double> w, std::span<double> dx, DenseShape s) {
  b == Backend::parallel ? parallel::dense_backward_input(dy, w, dx, s)
                         : serial::dense_backward_input(dy, w, dx, s);
}

void tanh_inplace(Backend b, std::span<double> v) {
  b == Backend::parallel ? parallel::tanh_inplace(v) : serial::tanh_inplace(v);
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace aero::kernels
