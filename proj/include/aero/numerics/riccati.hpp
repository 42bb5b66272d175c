#pragma once

#include "aero/numerics/matrix.hpp"

namespace aero::num {

struct RiccatiSolution {
  Matrix p;          // stabilizing solution, symmetric PSD
  Matrix k;          // optimal feedback gain, u = -K x
  double residual;   // Frobenius norm of the Riccati residual at p
  int iterations;
};

/// Continuous-time algebraic Riccati equation
///   Aᵀ P + P A - P B R⁻¹ Bᵀ P + Q = 0
/// solved by Kleinman-Newton iteration. The initial stabilizing gain comes
/// from Bass's pole-shifting construction (or K = 0 when A is Hurwitz).
///
/// Throws SynthesisError for bad weights or when (A, B) is not stabilizable
/// or (A, Q) is not detectable; NumericalError if the residual is not below
/// `residual_tol` after `max_iter` Newton steps.
RiccatiSolution solve_care(const Matrix& a, const Matrix& b, const Matrix& q,
                           const Matrix& r, double residual_tol = 1e-8,
                           int max_iter = 200);

/// Discrete-time algebraic Riccati equation
///   P = Aᵀ P A - Aᵀ P B (R + Bᵀ P B)⁻¹ Bᵀ P A + Q
/// solved by fixed-point (value) iteration from P = Q until successive
/// iterates agree to `step_tol`. Same error contract as solve_care.
RiccatiSolution solve_dare(const Matrix& a, const Matrix& b, const Matrix& q,
                           const Matrix& r, double residual_tol = 1e-10,
                           double step_tol = 1e-12, int max_iter = 1000000);

Matrix care_residual(const Matrix& a, const Matrix& b, const Matrix& q,
                     const Matrix& r, const Matrix& p);
Matrix dare_residual(const Matrix& a, const Matrix& b, const Matrix& q,
                     const Matrix& r, const Matrix& p);

/// PBH tests. `discrete` selects the instability region |λ| >= 1 instead of
/// Re λ >= 0.
bool is_stabilizable(const Matrix& a, const Matrix& b, bool discrete);
bool is_detectable(const Matrix& a, const Matrix& c, bool discrete);

}  // namespace aero::num
