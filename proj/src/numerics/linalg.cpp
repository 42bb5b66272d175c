#include "aero/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aero/errors.hpp"

namespace aero::num {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double norm_one(const Matrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

LuDecomposition::LuDecomposition(const Matrix& a) : lu_(a), perm_(a.rows()) {
  require_shape(a.square(), "LU of non-square matrix");
  const std::size_t n = a.rows();
  std::iota(perm_.begin(), perm_.end(), 0);
  const double scale = std::max(max_abs(a), std::numeric_limits<double>::min());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
    if (std::abs(lu_(p, k)) <= 64.0 * kEps * scale * static_cast<double>(n))
      throw NumericalError("LU: matrix is numerically singular");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(p, j), lu_(k, j));
      std::swap(perm_[p], perm_[k]);
      sign_ = -sign_;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu_(i, k) / lu_(k, k);
      lu_(i, k) = f;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

Vector LuDecomposition::solve(const Vector& b) const {
  const std::size_t n = lu_.rows();
  require_shape(b.size() == n, "LU solve rhs");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= lu_(ii, j) * x[j];
    x[ii] = s / lu_(ii, ii);
  }
  return x;
}

Matrix LuDecomposition::solve(const Matrix& b) const {
  require_shape(b.rows() == lu_.rows(), "LU solve rhs");
  Matrix x(b.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    Vector col = solve(b.col(j));
    for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = col[i];
  }
  return x;
}

double LuDecomposition::determinant() const {
  double d = sign_;
  for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
  return d;
}

Vector solve(const Matrix& a, const Vector& b) { return LuDecomposition(a).solve(b); }
Matrix solve(const Matrix& a, const Matrix& b) { return LuDecomposition(a).solve(b); }
Matrix inverse(const Matrix& a) {
  return LuDecomposition(a).solve(Matrix::identity(a.rows()));
}

std::vector<double> characteristic_polynomial(const Matrix& a) {
  require_shape(a.square(), "characteristic polynomial of non-square matrix");
  const std::size_t n = a.rows();
  std::vector<double> c(n + 1, 0.0);
  c[0] = 1.0;
  Matrix m = Matrix::zeros(n, n);
  const Matrix eye = Matrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m + c[k - 1] * eye;
    c[k] = -trace(a * m) / static_cast<double>(k);
  }
  return c;
}

Matrix polynomial_at(const std::vector<double>& coeffs, const Matrix& a) {
  require_shape(a.square(), "polynomial of non-square matrix");
  // Horner: ((A + c1 I) A + c2 I) A + ...
  Matrix result = Matrix::zeros(a.rows(), a.cols());
  const Matrix eye = Matrix::identity(a.rows());
  for (double c : coeffs) result = result * a + c * eye;
  return result;
}

std::vector<double> polynomial_from_roots(
    const std::vector<std::complex<double>>& roots) {
  std::vector<std::complex<double>> p{1.0};
  for (const auto& r : roots) {
    std::vector<std::complex<double>> next(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      next[i] += p[i];
      next[i + 1] -= r * p[i];
    }
    p = std::move(next);
  }
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (std::abs(p[i].imag()) > 1e-9 * std::max(1.0, std::abs(p[i])))
      throw SynthesisError("requested roots are not closed under conjugation");
    out[i] = p[i].real();
  }
  return out;
}

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs) {
  using cd = std::complex<double>;
  if (coeffs.empty() || coeffs[0] == 0.0)
    throw NumericalError("polynomial_roots: leading coefficient must be nonzero");
  const std::size_t n = coeffs.size() - 1;
  if (n == 0) return {};
  std::vector<double> c(coeffs.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeffs[i] / coeffs[0];

  auto eval = [&](cd z) {
    cd p = 1.0;
    for (std::size_t i = 1; i <= n; ++i) p = p * z + c[i];
    return p;
  };
  auto eval_deriv = [&](cd z) {
    cd p = 1.0, dp = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      dp = dp * z + p;
      p = p * z + c[i];
    }
    return dp;
  };

  // Cauchy bound on root magnitude.
  double bound = 0.0;
  for (std::size_t i = 1; i <= n; ++i) bound = std::max(bound, std::abs(c[i]));
  bound += 1.0;

  std::vector<cd> z(n);
  const cd seed(0.4, 0.9);
  for (std::size_t k = 0; k < n; ++k)
    z[k] = 0.5 * bound * std::pow(seed, static_cast<double>(k + 1));

  for (int iter = 0; iter < 5000; ++iter) {
    double change = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      cd denom = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) denom *= (z[k] - z[j]);
      if (std::abs(denom) == 0.0) denom = cd(kEps, kEps);
      const cd step = eval(z[k]) / denom;
      z[k] -= step;
      change = std::max(change, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    if (change < 4.0 * kEps) break;
  }
  for (auto& r : z) {
    for (int i = 0; i < 3; ++i) {
      const cd d = eval_deriv(r);
      if (std::abs(d) < 1e-300) break;
      const cd step = eval(r) / d;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      r -= step;
    }
  }
  // Snap near-real roots and pair conjugates.
  for (auto& r : z)
    if (std::abs(r.imag()) < 1e-12 * std::max(1.0, std::abs(r))) r = cd(r.real(), 0.0);
  std::sort(z.begin(), z.end(), [](cd a, cd b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return z;
}

std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
  require_shape(a.square(), "eigenvalues of non-square matrix");
  if (a.rows() > 8)
    throw DimensionError("eigenvalues: only small matrices (n <= 8) are supported");
  if (!all_finite(a)) throw NumericalError("eigenvalues: non-finite matrix");
  return polynomial_roots(characteristic_polynomial(a));
}

double spectral_radius(const Matrix& a) {
  double r = 0.0;
  for (const auto& l : eigenvalues(a)) r = std::max(r, std::abs(l));
  return r;
}

double spectral_abscissa(const Matrix& a) {
  double r = -std::numeric_limits<double>::infinity();
  for (const auto& l : eigenvalues(a)) r = std::max(r, l.real());
  return r;
}

bool is_hurwitz(const Matrix& a) { return spectral_abscissa(a) < 0.0; }
bool is_schur_stable(const Matrix& a) { return spectral_radius(a) < 1.0; }

std::size_t complex_rank(const std::vector<std::vector<std::complex<double>>>& rows_in,
                         double tol) {
  auto rows = rows_in;
  if (rows.empty()) return 0;
  const std::size_t m = rows.size();
  const std::size_t n = rows[0].size();
  double scale = 0.0;
  for (const auto& r : rows)
    for (const auto& x : r) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0;
  const double thresh = tol * scale;

  std::size_t rank = 0;
  std::vector<bool> used_col(n, false);
  for (std::size_t step = 0; step < std::min(m, n); ++step) {
    // Full pivoting over the remaining submatrix.
    std::size_t pr = 0, pc = 0;
    double best = 0.0;
    for (std::size_t i = rank; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!used_col[j] && std::abs(rows[i][j]) > best) {
          best = std::abs(rows[i][j]);
          pr = i;
          pc = j;
        }
    if (best <= thresh) break;
    std::swap(rows[rank], rows[pr]);
    used_col[pc] = true;
    for (std::size_t i = rank + 1; i < m; ++i) {
      const auto f = rows[i][pc] / rows[rank][pc];
      for (std::size_t j = 0; j < n; ++j) rows[i][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

double largest_eigenvalue_psd(const Matrix& h, int max_iter, double rel_tol) {
  require_shape(h.square(), "power iteration on non-square matrix");
  const std::size_t n = h.rows();
  if (n == 0) return 0.0;
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = 1.0 + 0.1 * std::sin(static_cast<double>(i + 1));
  v *= 1.0 / norm2(v);
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = h * v;
    const double rayleigh = dot(v, w);
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    v = (1.0 / nw) * w;
    if (it > 0 && std::abs(rayleigh - lambda) <= rel_tol * std::abs(rayleigh)) {
      lambda = rayleigh;
      break;
    }
    lambda = rayleigh;
  }
  return lambda;
}

namespace {
bool cholesky_ok(const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return false;
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return true;
}
}  // namespace

bool is_positive_definite(const Matrix& a) {
  require_shape(a.square(), "definiteness of non-square matrix");
  if (asymmetry(a) > 1e-10 * std::max(1.0, max_abs(a))) return false;
  return cholesky_ok(a);
}

bool is_positive_semidefinite(const Matrix& a, double tol) {
  require_shape(a.square(), "definiteness of non-square matrix");
  if (asymmetry(a) > 1e-10 * std::max(1.0, max_abs(a))) return false;
  const double shift = tol * std::max(1.0, max_abs(a));
  return cholesky_ok(a + shift * Matrix::identity(a.rows()));
}

Matrix solve_continuous_lyapunov(const Matrix& a, const Matrix& q) {
  require_shape(a.square() && q.rows() == a.rows() && q.cols() == a.cols(),
                "Lyapunov operands");
  const std::size_t n = a.rows();
  const std::size_t nn = n * n;
  Matrix k(nn, nn);
  Vector rhs(nn);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      rhs[row] = -q(i, j);
      for (std::size_t l = 0; l < n; ++l) {
        k(row, l * n + j) += a(l, i);  // (Aᵀ X)_ij
        k(row, i * n + l) += a(l, j);  // (X A)_ij
      }
    }
  }
  Vector x;
  try {
    x = solve(k, rhs);
  } catch (const NumericalError&) {
    throw NumericalError("Lyapunov equation is singular (A has eigenvalues summing to zero)");
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = x[i * n + j];
  return symmetrized(out);
}

Matrix expm(const Matrix& a) {
  require_shape(a.square(), "expm of non-square matrix");
  if (!all_finite(a)) throw NumericalError("expm: non-finite matrix");
  const std::size_t n = a.rows();
  const double norm = norm_one(a);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix scaled = std::ldexp(1.0, -squarings) * a;

  Matrix sum = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 40; ++k) {
    term = (1.0 / k) * (term * scaled);
    sum += term;
    if (max_abs(term) <= kEps * max_abs(sum)) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

DiscretePair zoh_discretize(const Matrix& a, const Vector& b, double ts) {
  require_shape(a.square() && b.size() == a.rows(), "zoh_discretize operands");
  if (!(ts > 0.0)) throw NumericalError("zoh_discretize: sampling period must be positive");
  const std::size_t n = a.rows();
  Matrix m(n + 1, n + 1);
  m.set_block(0, 0, a);
  for (std::size_t i = 0; i < n; ++i) m(i, n) = b[i];
  const Matrix e = expm(ts * m);
  DiscretePair out{e.block(0, 0, n, n), Vector(n)};
  for (std::size_t i = 0; i < n; ++i) out.bd[i] = e(i, n);
  return out;
}

}  // namespace aero::num
