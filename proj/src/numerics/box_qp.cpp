#include "aero/numerics/box_qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aero/errors.hpp"
#include "aero/numerics/linalg.hpp"

namespace aero::num {

void BoxQp::validate() const {
  const std::size_t n = f.size();
  require_shape(h.rows() == n && h.cols() == n, "box QP Hessian");
  require_shape(lower.size() == n && upper.size() == n, "box QP bounds");
  if (asymmetry(h) > 1e-10 * std::max(1.0, max_abs(h)))
    throw NumericalError("box QP: Hessian is not symmetric");
  for (std::size_t i = 0; i < n; ++i)
    if (!(lower[i] <= upper[i])) throw NumericalError("box QP: empty box");
}

double BoxQp::objective(const Vector& z) const {
  return 0.5 * dot(z, h * z) + dot(f, z);
}

Vector BoxQp::gradient(const Vector& z) const { return h * z + f; }

Vector BoxQp::project(Vector z) const {
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = std::clamp(z[i], lower[i], upper[i]);
  return z;
}

double BoxQp::fixed_point_residual(const Vector& z) const {
  const Vector g = gradient(z);
  double r = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double p = std::clamp(z[i] - g[i], lower[i], upper[i]);
    r = std::max(r, std::abs(z[i] - p));
  }
  return r;
}

QpResult solve_box_qp(const BoxQp& qp, const QpOptions& options,
                      const std::optional<Vector>& warm_start) {
  qp.validate();
  const std::size_t n = qp.f.size();
  QpResult result;
  if (n == 0) {
    result.converged = true;
    return result;
  }

  // Power iteration approaches λmax from below; pad by 1% to keep 1/L safe.
  double lipschitz = options.lipschitz.value_or(1.01 * largest_eigenvalue_psd(qp.h));
  if (!(lipschitz > 0.0)) lipschitz = 1.0;  // H == 0: any step works
  const double step = 1.0 / lipschitz;

  Vector z = qp.project(warm_start && warm_start->size() == n ? *warm_start : Vector(n));
  Vector y = z;
  double t = 1.0;

  Vector best = z;
  double best_res = qp.fixed_point_residual(z);
  if (best_res < options.tol) {
    return {z, 0, true, best_res};
  }

  int it = 0;
  for (; it < options.max_iter; ++it) {
    const Vector gy = qp.gradient(y);
    Vector z_next(n);
    for (std::size_t i = 0; i < n; ++i)
      z_next[i] = std::clamp(y[i] - step * gy[i], qp.lower[i], qp.upper[i]);

    const double res = qp.fixed_point_residual(z_next);
    if (res < best_res) {
      best_res = res;
      best = z_next;
    }
    if (res < options.tol) {
      z = std::move(z_next);
      ++it;
      return {z, it, true, res};
    }

    // Restart momentum when it points uphill: (y − z⁺)ᵀ(z⁺ − z) > 0.
    double uphill = 0.0;
    for (std::size_t i = 0; i < n; ++i) uphill += (y[i] - z_next[i]) * (z_next[i] - z[i]);
    double t_next;
    if (uphill > 0.0) {
      t_next = 1.0;
      y = z_next;
    } else {
      t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double beta = (t - 1.0) / t_next;
      for (std::size_t i = 0; i < n; ++i) y[i] = z_next[i] + beta * (z_next[i] - z[i]);
    }
    z = std::move(z_next);
    t = t_next;
  }
  return {best, it, false, best_res};
}

}  // namespace aero::num
