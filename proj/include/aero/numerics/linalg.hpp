#pragma once

#include <complex>
#include <vector>

#include "aero/numerics/matrix.hpp"

namespace aero::num {

/// LU factorization with partial pivoting. Throws NumericalError when a
/// pivot falls below `eps * scale` (numerically singular).
class LuDecomposition {
 public:
  explicit LuDecomposition(const Matrix& a);

  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;
  double determinant() const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
};

Vector solve(const Matrix& a, const Vector& b);
Matrix solve(const Matrix& a, const Matrix& b);
Matrix inverse(const Matrix& a);

/// Coefficients c[0..n] of det(sI - A) = s^n + c[1] s^(n-1) + ... + c[n]
/// (c[0] == 1), by the Faddeev-LeVerrier recurrence.
std::vector<double> characteristic_polynomial(const Matrix& a);

/// Evaluate the monic polynomial with the given coefficients at a matrix.
Matrix polynomial_at(const std::vector<double>& coeffs, const Matrix& a);

/// Coefficients of prod (s - root), highest degree first, leading 1.
/// Roots must be closed under conjugation for a real result.
std::vector<double> polynomial_from_roots(
    const std::vector<std::complex<double>>& roots);

/// Roots of a real monic polynomial (Durand-Kerner with Newton polish).
std::vector<std::complex<double>> polynomial_roots(
    const std::vector<double>& coeffs);

/// Eigenvalues of a small square matrix via its characteristic polynomial.
/// Intended for the state dimensions used here (n <= 8).
std::vector<std::complex<double>> eigenvalues(const Matrix& a);

double spectral_radius(const Matrix& a);
double spectral_abscissa(const Matrix& a);  // max real part
bool is_hurwitz(const Matrix& a);
bool is_schur_stable(const Matrix& a);

/// Rank of [A - lambda I ; C] (stacked) or [A - lambda I, B] (side by side)
/// evaluated in complex arithmetic. Used for PBH tests.
std::size_t complex_rank(const std::vector<std::vector<std::complex<double>>>& rows,
                         double tol);

/// Largest eigenvalue of a symmetric positive semidefinite matrix by power
/// iteration.
double largest_eigenvalue_psd(const Matrix& h, int max_iter = 500,
                              double rel_tol = 1e-12);

/// Cholesky-based positive-definiteness test.
bool is_positive_definite(const Matrix& a);
/// Symmetric PSD test via Cholesky of A + tol I.
bool is_positive_semidefinite(const Matrix& a, double tol = 1e-10);

/// Solve Aᵀ X + X A + Q = 0 for symmetric X (Kronecker formulation).
Matrix solve_continuous_lyapunov(const Matrix& a, const Matrix& q);

/// exp(A) by scaling and squaring with a Taylor series summed to
/// machine precision.
Matrix expm(const Matrix& a);

struct DiscretePair {
  Matrix ad;
  Vector bd;
};

/// Exact zero-order-hold sampling of x' = A x + b u:
/// Ad = exp(A Ts), bd = ∫₀^Ts exp(A τ) dτ b, both read off one exponential
/// of the augmented matrix [[A, b], [0, 0]].
DiscretePair zoh_discretize(const Matrix& a, const Vector& b, double ts);

}  // namespace aero::num
