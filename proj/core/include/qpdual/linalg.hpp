#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace qpdual {

using Vector = std::vector<double>;

// Dense row-major matrix. Everything in this project is desk scale, so no
// attempt is made at blocking or sparsity.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diag(const Vector& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_square() const { return rows_ == cols_; }
  bool is_symmetric(double tol = 0.0) const;
  bool all_finite() const;

  Matrix transposed() const;
  Matrix symmetrized() const;  // (M + M^T)/2

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator*(double s) const;
  Matrix& operator+=(const Matrix& o);

  Vector mul(const Vector& x) const;          // M x
  double quad(const Vector& x) const;         // x^T M x (square only)
  double bilinear(const Vector& x, const Vector& y) const;  // x^T M y

  double frobenius_norm() const;
  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
double norm_inf(const Vector& a);
Vector axpy(double a, const Vector& x, const Vector& y);  // a*x + y
Vector scaled(const Vector& x, double a);
Vector unit_vector(std::size_t n, std::size_t i);

}  // namespace qpdual
