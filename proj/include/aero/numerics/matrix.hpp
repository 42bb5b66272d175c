#pragma once

// Small dense row-major matrices and vectors. System sizes in this project
// are at most a few states plus a 60-step input horizon, so everything is
// value-typed and bounds-checked on shape.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace aero::num {

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double value = 0.0) : data_(n, value) {}
  Vector(std::initializer_list<double> values) : data_(values) {}
  explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

  static Vector zeros(std::size_t n) { return Vector(n, 0.0); }
  static Vector unit(std::size_t n, std::size_t i);

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> span() { return data_; }
  std::span<const double> span() const { return data_; }
  const std::vector<double>& values() const { return data_; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double s);

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> data_;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}
  /// Row-wise literal: Matrix{{1, 2}, {3, 4}}.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix zeros(std::size_t rows, std::size_t cols) {
    return Matrix(rows, cols, 0.0);
  }
  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vector& d);
  static Matrix column(const Vector& v);
  static Matrix row(const Vector& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> row_span(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row_span(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  Matrix transposed() const;
  Vector col(std::size_t j) const;
  Vector row_vector(std::size_t i) const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t rows,
               std::size_t cols) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& m);

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator-(Vector a);
Vector operator*(double s, Vector v);
Vector operator*(Vector v, double s);

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix m);
Matrix operator*(Matrix m, double s);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);

double dot(const Vector& a, const Vector& b);
Matrix outer(const Vector& a, const Vector& b);
/// aᵀ·M for a row vector a.
Vector left_multiply(const Vector& a, const Matrix& m);

double norm_inf(const Vector& v);
double norm2(const Vector& v);
double norm_fro(const Matrix& m);
double max_abs(const Matrix& m);
double trace(const Matrix& m);

/// Largest asymmetry |M(i,j) - M(j,i)|.
double asymmetry(const Matrix& m);
Matrix symmetrized(const Matrix& m);

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);

/// Throws DimensionError with `what` in the message when `ok` is false.
void require_shape(bool ok, const std::string& what);

std::string to_string(const Matrix& m);

}  // namespace aero::num
