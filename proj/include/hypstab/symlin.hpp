#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hypstab {

using Vector = std::vector<double>;

// Dense square matrix, row-major. Used for non-symmetric data such as the
// source term B and the eigenvector matrix T.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
  // Row-major n*n entries.
  Matrix(std::size_t n, std::vector<double> entries);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  std::span<const double> data() const { return a_; }

  Matrix transpose() const;
  Vector apply(std::span<const double> x) const;
  // this^T x without forming the transpose
  Vector apply_transpose(std::span<const double> x) const;
  std::vector<std::vector<double>> rows() const;
  double max_abs() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

// Symmetric matrix. Construction rejects inputs whose asymmetry exceeds
// 1e-9 * max|a_ij| and otherwise stores the symmetric part (A + A^T)/2.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : m_(n) {}
  SymMatrix(std::size_t n, std::vector<double> entries);
  explicit SymMatrix(const Matrix& m);

  // Symmetric part of m, accepted when max asymmetry <= tol * (1 + max|m_ij|).
  // Throws NotSymmetric otherwise.
  static SymMatrix from_near_symmetric(const Matrix& m, double tol);
  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static SymMatrix identity(std::size_t n);

  std::size_t size() const { return m_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const { return m_; }
  double max_abs() const { return m_.max_abs(); }
  double trace() const;
  double frobenius() const;
  std::vector<std::vector<double>> rows() const { return m_.rows(); }

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator*=(double s);
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  SymMatrix operator-() const { return -1.0 * *this; }

  bool operator==(const SymMatrix&) const = default;

 private:
  Matrix m_;
};

// Orthogonal diagonalization A = T diag(eigenvalues) T^T, eigenvalues
// ascending, column i of T the eigenvector of eigenvalues[i].
struct EigenDecomposition {
  Vector eigenvalues;
  Matrix T;
};

// Sum_k nu_k A^(k). nu must be a unit vector (|nu| - 1 within 1e-12).
SymMatrix assemble_pencil(std::span<const SymMatrix> jacobians, std::span<const double> nu);

// Cyclic Jacobi. Converged when the off-diagonal Frobenius norm drops to
// 1e-12 * |A|_F; at most 100 sweeps. Eigenvector columns are signed so the
// first component with magnitude above 1e-12 is positive.
EigenDecomposition eigendecompose(const SymMatrix& a);

// Eigenvalues only (same rotation sequence as eigendecompose), ascending.
Vector eigenvalues(const SymMatrix& a);
double max_eigenvalue(const SymMatrix& a);
double min_eigenvalue(const SymMatrix& a);
double spectral_radius(const SymMatrix& a);

bool is_negative_semidefinite(const SymMatrix& a, double slack = 0.0);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace hypstab
