#include "hypstab/symlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hypstab/errors.hpp"

namespace hypstab {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kRelativeOffTol = 1e-12;
constexpr double kSignThreshold = 1e-12;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

struct JacobiResult {
  Vector diagonal;
  Matrix vectors;
};

JacobiResult jacobi(const SymMatrix& s, bool want_vectors) {
  const std::size_t n = s.size();
  Matrix a = s.matrix();
  Matrix v = want_vectors ? Matrix::identity(n) : Matrix();
  const double tol = kRelativeOffTol * s.frobenius();

  bool converged = false;
  for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= tol) {
      converged = true;
      break;
    }
    if (sweep == kMaxSweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = v(k, p);
            const double vkq = v(k, q);
            v(k, p) = c * vkp - sn * vkq;
            v(k, q) = sn * vkp + c * vkq;
          }
        }
      }
    }
  }
  if (!converged) {
    throw NoConvergence("Jacobi eigensolver did not converge within " +
                        std::to_string(kMaxSweeps) + " sweeps");
  }
  Vector d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  return {std::move(d), std::move(v)};
}

std::vector<std::size_t> ascending_order(const Vector& d) {
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
  return idx;
}

}  // namespace

Matrix::Matrix(std::size_t n, std::vector<double> entries) : n_(n), a_(std::move(entries)) {
  if (a_.size() != n * n) {
    throw SizeMismatch("matrix of size " + std::to_string(n) + " needs " + std::to_string(n * n) +
                       " entries, got " + std::to_string(a_.size()));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw SizeMismatch("matrix rows must form a square array");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

Vector Matrix::apply(std::span<const double> x) const {
  if (x.size() != n_) throw SizeMismatch("matrix-vector size mismatch");
  Vector y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Vector Matrix::apply_transpose(std::span<const double> x) const {
  if (x.size() != n_) throw SizeMismatch("matrix-vector size mismatch");
  Vector y(n_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += (*this)(i, j) * x[i];
    y[j] = s;
  }
  return y;
}

std::vector<std::vector<double>> Matrix::rows() const {
  std::vector<std::vector<double>> r(n_, std::vector<double>(n_));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) r[i][j] = (*this)(i, j);
  }
  return r;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::abs(x));
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw SizeMismatch("matrix product size mismatch");
  Matrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

SymMatrix::SymMatrix(std::size_t n, std::vector<double> entries) : SymMatrix(Matrix(n, std::move(entries))) {}

SymMatrix::SymMatrix(const Matrix& m) : m_(m.size()) {
  if (!all_finite(m.data())) throw NonFinite("symmetric matrix has non-finite entries");
  const std::size_t n = m.size();
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
  }
  if (asym > 1e-9 * m.max_abs()) {
    throw NotSymmetric("matrix asymmetry " + std::to_string(asym) + " exceeds 1e-9 * max|a_ij|");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m_(i, j) = 0.5 * (m(i, j) + m(j, i));
  }
}

SymMatrix SymMatrix::from_near_symmetric(const Matrix& m, double tol) {
  if (!all_finite(m.data())) throw NonFinite("symmetric matrix has non-finite entries");
  const std::size_t n = m.size();
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
  }
  if (asym > tol * (1.0 + m.max_abs())) {
    throw NotSymmetric("matrix asymmetry " + std::to_string(asym) + " exceeds tolerance");
  }
  Matrix sym(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (m(i, j) + m(j, i));
  }
  return SymMatrix(sym);
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  return SymMatrix(Matrix::from_rows(rows));
}

SymMatrix SymMatrix::identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < size(); ++i) t += m_(i, i);
  return t;
}

double SymMatrix::frobenius() const {
  double s = 0.0;
  for (double x : m_.data()) s += x * x;
  return std::sqrt(s);
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.size() != size()) throw SizeMismatch("symmetric matrix sum size mismatch");
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) m_(i, j) += o(i, j);
  }
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) m_(i, j) *= s;
  }
  return *this;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw SizeMismatch("dot product size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

SymMatrix assemble_pencil(std::span<const SymMatrix> jacobians, std::span<const double> nu) {
  if (jacobians.empty()) throw SizeMismatch("pencil needs at least one Jacobian");
  if (nu.size() != jacobians.size()) {
    throw SizeMismatch("direction has " + std::to_string(nu.size()) + " components for " +
                       std::to_string(jacobians.size()) + " Jacobians");
  }
  if (!all_finite(nu) || std::abs(norm2(nu) - 1.0) > 1e-12) {
    throw NonUnitDirection("pencil direction must be a unit vector");
  }
  const std::size_t n = jacobians.front().size();
  SymMatrix p(n);
  for (std::size_t k = 0; k < jacobians.size(); ++k) {
    if (jacobians[k].size() != n) throw SizeMismatch("Jacobians differ in size");
    p += nu[k] * jacobians[k];
  }
  return p;
}

EigenDecomposition eigendecompose(const SymMatrix& a) {
  const std::size_t n = a.size();
  auto [d, v] = jacobi(a, true);
  const auto order = ascending_order(d);
  EigenDecomposition out{Vector(n), Matrix(n)};
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.eigenvalues[c] = d[src];
    double sign = 1.0;
    for (std::size_t r = 0; r < n; ++r) {
      if (std::abs(v(r, src)) > kSignThreshold) {
        sign = v(r, src) > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    for (std::size_t r = 0; r < n; ++r) out.T(r, c) = sign * v(r, src);
  }
  return out;
}

Vector eigenvalues(const SymMatrix& a) {
  auto d = jacobi(a, false).diagonal;
  std::stable_sort(d.begin(), d.end());
  return d;
}

double max_eigenvalue(const SymMatrix& a) {
  if (a.size() == 0) throw SizeMismatch("empty matrix has no eigenvalues");
  const auto d = jacobi(a, false).diagonal;
  return *std::max_element(d.begin(), d.end());
}

double min_eigenvalue(const SymMatrix& a) {
  if (a.size() == 0) throw SizeMismatch("empty matrix has no eigenvalues");
  const auto d = jacobi(a, false).diagonal;
  return *std::min_element(d.begin(), d.end());
}

double spectral_radius(const SymMatrix& a) {
  const auto d = jacobi(a, false).diagonal;
  double r = 0.0;
  for (double x : d) r = std::max(r, std::abs(x));
  return r;
}

bool is_negative_semidefinite(const SymMatrix& a, double slack) { return max_eigenvalue(a) <= slack; }

}  // namespace hypstab
