#include "aero/numerics/riccati.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "aero/errors.hpp"
#include "aero/numerics/linalg.hpp"

namespace aero::num {

namespace {

constexpr double kPbhTol = 1e-9;

using ComplexRows = std::vector<std::vector<std::complex<double>>>;

bool unstable(std::complex<double> l, bool discrete) {
  return discrete ? std::abs(l) >= 1.0 - 1e-10 : l.real() >= -1e-10;
}

void check_weights(const Matrix& a, const Matrix& b, const Matrix& q,
                   const Matrix& r) {
  require_shape(a.square(), "Riccati A must be square");
  require_shape(b.rows() == a.rows(), "Riccati B rows");
  require_shape(q.rows() == a.rows() && q.cols() == a.cols(), "Riccati Q shape");
  require_shape(r.rows() == b.cols() && r.cols() == b.cols(), "Riccati R shape");
  if (!all_finite(a) || !all_finite(b) || !all_finite(q) || !all_finite(r))
    throw SynthesisError("Riccati: non-finite input");
  if (!is_positive_semidefinite(q)) throw SynthesisError("Riccati: Q must be symmetric PSD");
  if (!is_positive_definite(r)) throw SynthesisError("Riccati: R must be symmetric PD");
}

Matrix gain_continuous(const Matrix& b, const Matrix& r, const Matrix& p) {
  return solve(r, b.transposed() * p);
}

Matrix gain_discrete(const Matrix& a, const Matrix& b, const Matrix& r,
                     const Matrix& p) {
  const Matrix btp = b.transposed() * p;
  return solve(r + btp * b, btp * a);
}

// Bass: with β larger than every |λ(A)|, solve
//   (A + βI) Z + Z (A + βI)ᵀ = 2 B Bᵀ.
// Then F = A - B Bᵀ Z⁻¹ satisfies F Z + Z Fᵀ = -2β Z, so F is Hurwitz.
Matrix initial_stabilizing_gain(const Matrix& a, const Matrix& b) {
  if (is_hurwitz(a)) return Matrix::zeros(b.cols(), a.rows());
  double beta = 1.0;
  for (const auto& l : eigenvalues(a)) beta = std::max(beta, std::abs(l) + 1.0);
  const Matrix shifted = a + beta * Matrix::identity(a.rows());
  // solve_continuous_lyapunov solves Mᵀ X + X M + Q = 0; pass M = shiftedᵀ.
  const Matrix z = solve_continuous_lyapunov(shifted.transposed(),
                                             -2.0 * (b * b.transposed()));
  if (!is_positive_definite(z))
    throw SynthesisError("CARE: (A, B) is stabilizable but not controllable; "
                         "no initial stabilizing gain available");
  Matrix k = b.transposed() * inverse(z);
  if (!is_hurwitz(a - b * k))
    throw NumericalError("CARE: pole-shifting gain failed to stabilize");
  return k;
}

}  // namespace

bool is_stabilizable(const Matrix& a, const Matrix& b, bool discrete) {
  const std::size_t n = a.rows();
  for (const auto& l : eigenvalues(a)) {
    if (!unstable(l, discrete)) continue;
    ComplexRows rows(n, std::vector<std::complex<double>>(n + b.cols()));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) rows[i][j] = a(i, j) - (i == j ? l : 0.0);
      for (std::size_t j = 0; j < b.cols(); ++j) rows[i][n + j] = b(i, j);
    }
    if (complex_rank(rows, kPbhTol) < n) return false;
  }
  return true;
}

bool is_detectable(const Matrix& a, const Matrix& c, bool discrete) {
  const std::size_t n = a.rows();
  for (const auto& l : eigenvalues(a)) {
    if (!unstable(l, discrete)) continue;
    ComplexRows rows(n + c.rows(), std::vector<std::complex<double>>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rows[i][j] = a(i, j) - (i == j ? l : 0.0);
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t j = 0; j < n; ++j) rows[n + i][j] = c(i, j);
    if (complex_rank(rows, kPbhTol) < n) return false;
  }
  return true;
}

Matrix care_residual(const Matrix& a, const Matrix& b, const Matrix& q,
                     const Matrix& r, const Matrix& p) {
  const Matrix pb = p * b;
  return a.transposed() * p + p * a - pb * solve(r, pb.transposed()) + q;
}

Matrix dare_residual(const Matrix& a, const Matrix& b, const Matrix& q,
                     const Matrix& r, const Matrix& p) {
  const Matrix atpb = a.transposed() * p * b;
  const Matrix btpb = b.transposed() * p * b;
  return a.transposed() * p * a - atpb * solve(r + btpb, atpb.transposed()) + q - p;
}

RiccatiSolution solve_care(const Matrix& a, const Matrix& b, const Matrix& q,
                           const Matrix& r, double residual_tol, int max_iter) {
  check_weights(a, b, q, r);
  if (!is_stabilizable(a, b, false))
    throw SynthesisError("CARE: (A, B) is not stabilizable");
  if (!is_detectable(a, q, false))
    throw SynthesisError("CARE: (A, Q) is not detectable");

  Matrix k = initial_stabilizing_gain(a, b);
  Matrix p = Matrix::zeros(a.rows(), a.cols());
  int it = 0;
  for (; it < max_iter; ++it) {
    const Matrix closed = a - b * k;
    const Matrix p_next =
        solve_continuous_lyapunov(closed, q + k.transposed() * r * k);
    const double step = norm_fro(p_next - p);
    p = p_next;
    k = gain_continuous(b, r, p);
    if (step <= 1e-14 * std::max(1.0, norm_fro(p))) {
      ++it;
      break;
    }
  }
  const double residual = norm_fro(care_residual(a, b, q, r, p));
  if (!(residual < residual_tol))
    throw NumericalError("CARE: residual " + std::to_string(residual) +
                         " above tolerance after " + std::to_string(it) + " iterations");
  if (!is_hurwitz(a - b * k))
    throw SynthesisError("CARE: closed loop is not Hurwitz");
  return {p, k, residual, it};
}

RiccatiSolution solve_dare(const Matrix& a, const Matrix& b, const Matrix& q,
                           const Matrix& r, double residual_tol, double step_tol,
                           int max_iter) {
  check_weights(a, b, q, r);
  if (!is_stabilizable(a, b, true))
    throw SynthesisError("DARE: (A, B) is not stabilizable");
  if (!is_detectable(a, q, true))
    throw SynthesisError("DARE: (A, Q) is not detectable");

  const Matrix at = a.transposed();
  Matrix p = q;
  int it = 0;
  bool converged = false;
  for (; it < max_iter; ++it) {
    const Matrix atpb = at * p * b;
    const Matrix btpb = b.transposed() * p * b;
    Matrix p_next = symmetrized(at * p * a - atpb * solve(r + btpb, atpb.transposed()) + q);
    const double step = max_abs(p_next - p);
    p = std::move(p_next);
    // Below ~8 ulp of |P| the iteration only shuffles rounding error.
    const double floor =
        8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, max_abs(p));
    if (step <= std::max(step_tol, floor)) {
      converged = true;
      ++it;
      break;
    }
  }
  if (!converged)
    throw NumericalError("DARE: fixed-point iteration did not converge in " +
                         std::to_string(max_iter) + " iterations");
  const Matrix k = gain_discrete(a, b, r, p);
  const double residual = norm_fro(dare_residual(a, b, q, r, p));
  if (!(residual < residual_tol))
    throw NumericalError("DARE: residual " + std::to_string(residual) +
                         " above tolerance");
  if (!is_schur_stable(a - b * k))
    throw SynthesisError("DARE: closed loop is not Schur stable");
  return {p, k, residual, it};
}

}  // namespace aero::num
