#pragma once

#include <optional>

#include "aero/numerics/matrix.hpp"

namespace aero::num {

/// minimize ½ zᵀ H z + fᵀ z   subject to lower <= z <= upper.
struct BoxQp {
  Matrix h;
  Vector f;
  Vector lower;
  Vector upper;

  /// Throws DimensionError / NumericalError when H is not square and
  /// symmetric (1e-10) or the box is empty.
  void validate() const;

  double objective(const Vector& z) const;
  Vector gradient(const Vector& z) const;
  Vector project(Vector z) const;
  /// ‖z − Π(z − ∇q(z))‖∞; zero exactly at a KKT point.
  double fixed_point_residual(const Vector& z) const;
};

struct QpOptions {
  double tol = 1e-6;
  int max_iter = 400;
  /// Known upper bound on λmax(H); power iteration is used when absent.
  std::optional<double> lipschitz;
};

struct QpResult {
  Vector z;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
};

/// Accelerated projected gradient (FISTA) with gradient-based adaptive
/// restart and step 1/L. On hitting max_iter the iterate with the smallest
/// fixed-point residual is returned with converged == false.
QpResult solve_box_qp(const BoxQp& qp, const QpOptions& options = {},
                      const std::optional<Vector>& warm_start = std::nullopt);

}  // namespace aero::num
