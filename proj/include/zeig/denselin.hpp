#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace zeig {

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transposed() const;
  double max_abs() const;
  double frobenius() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);

/// Square symmetric matrix. Constructing from a general matrix replaces it by
/// (A + A^T)/2, which is exact when the input is already symmetric.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : m_(n, n) {}
  explicit SymMatrix(Matrix a);

  std::size_t dim() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }

  std::vector<double> apply(std::span<const double> x) const { return m_ * x; }

 private:
  Matrix m_;
};

/// max |a_ij - a_ji|
double asymmetry(const Matrix& a);

/// Eigen-decomposition of a symmetric matrix. Eigenvalues ascend and
/// column j of `vectors` belongs to `values[j]`.
struct Spectrum {
  std::vector<double> values;
  Matrix vectors;
};

/// Raised when the Jacobi sweep cap is hit; carries the off-diagonal
/// Frobenius mass that remained.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double off_diagonal)
      : std::runtime_error(what), off_diagonal_(off_diagonal) {}
  double off_diagonal() const noexcept { return off_diagonal_; }

 private:
  double off_diagonal_;
};

/// Cyclic Jacobi eigensolver. Iterates until the off-diagonal Frobenius mass
/// drops below 1e-14 * ||A||_F, at most 100 sweeps.
Spectrum eigh(const SymMatrix& a);

double lambda_min(const SymMatrix& a);
double lambda_max(const SymMatrix& a);
double spectral_radius(const SymMatrix& a);

/// Eigenvalues of a general square matrix via Hessenberg reduction and
/// shifted QR. No eigenvectors; order is unspecified.
std::vector<std::complex<double>> eig_general(const Matrix& a);

/// n x (n-1) matrix whose orthonormal columns span the complement of the
/// unit vector x: columns 2..n of a Householder reflector sending e_1 to +-x.
Matrix ortho_complement(std::span<const double> x);

/// Solves A y = b by Gaussian elimination with partial pivoting. Throws
/// std::runtime_error when A is numerically singular.
std::vector<double> solve_linear(Matrix a, std::vector<double> b);

// Small vector helpers used throughout.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace zeig
