#include "aero/numerics/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aero/errors.hpp"

namespace aero::num {

void require_shape(bool ok, const std::string& what) {
  if (!ok) throw DimensionError("dimension mismatch: " + what);
}

Vector Vector::unit(std::size_t n, std::size_t i) {
  Vector v(n);
  v[i] = 1.0;
  return v;
}

Vector& Vector::operator+=(const Vector& other) {
  require_shape(size() == other.size(), "vector +=");
  for (std::size_t i = 0; i < size(); ++i) data_[i] += other[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_shape(size() == other.size(), "vector -=");
  for (std::size_t i = 0; i < size(); ++i) data_[i] -= other[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (auto& x : data_) x *= s;
  return *this;
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require_shape(r.size() == cols_, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::column(const Vector& v) {
  Matrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

Matrix Matrix::row(const Vector& v) {
  Matrix m(1, v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m(0, i) = v[i];
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vector Matrix::col(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vector Matrix::row_vector(std::size_t i) const {
  auto r = row_span(i);
  return Vector(std::vector<double>(r.begin(), r.end()));
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t rows,
                     std::size_t cols) const {
  require_shape(r0 + rows <= rows_ && c0 + cols <= cols_, "block out of range");
  Matrix b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& m) {
  require_shape(r0 + m.rows() <= rows_ && c0 + m.cols() <= cols_,
                "set_block out of range");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) (*this)(r0 + i, c0 + j) = m(i, j);
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_shape(rows_ == other.rows_ && cols_ == other.cols_, "matrix +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_shape(rows_ == other.rows_ && cols_ == other.cols_, "matrix -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (auto& x : data_) x *= s;
  return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator-(Vector a) { return a *= -1.0; }
Vector operator*(double s, Vector v) { return v *= s; }
Vector operator*(Vector v, double s) { return v *= s; }

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix m) { return m *= s; }
Matrix operator*(Matrix m, double s) { return m *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_shape(a.cols() == b.rows(), "matrix product");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
  require_shape(a.cols() == x.size(), "matrix-vector product");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    auto r = a.row_span(i);
    for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

double dot(const Vector& a, const Vector& b) {
  require_shape(a.size() == b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Matrix outer(const Vector& a, const Vector& b) {
  Matrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

Vector left_multiply(const Vector& a, const Matrix& m) {
  require_shape(a.size() == m.rows(), "row-vector product");
  Vector y(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) y[j] += a[i] * m(i, j);
  }
  return y;
}

double norm_inf(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

double norm_fro(const Matrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (double x : m.row_span(i)) s += x * x;
  return std::sqrt(s);
}

double max_abs(const Matrix& m) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (double x : m.row_span(i)) r = std::max(r, std::abs(x));
  return r;
}

double trace(const Matrix& m) {
  require_shape(m.square(), "trace of non-square matrix");
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, i);
  return s;
}

double asymmetry(const Matrix& m) {
  require_shape(m.square(), "asymmetry of non-square matrix");
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      r = std::max(r, std::abs(m(i, j) - m(j, i)));
  return r;
}

Matrix symmetrized(const Matrix& m) {
  return 0.5 * (m + m.transposed());
}

bool all_finite(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

bool all_finite(const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (double x : m.row_span(i))
      if (!std::isfinite(x)) return false;
  return true;
}

std::string to_string(const Matrix& m) {
  std::ostringstream os;
  os.precision(10);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i == 0 ? "[[" : " [");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
    os << (i + 1 == m.rows() ? "]]" : "]\n");
  }
  return os.str();
}

}  // namespace aero::num
