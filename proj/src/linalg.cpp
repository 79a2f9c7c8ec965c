#include "zinc/linalg.hpp"

#include <cmath>
#include <cstdlib>

#include "zinc/errors.hpp"

namespace zinc {

Matrix Matrix::identity(std::size_t n) {
  Matrix I(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Vector matvec(const Matrix& A, const Vector& x) {
  Vector y(A.rows(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const double* r = A.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < A.cols(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

Vector tmatvec(const Matrix& A, const Vector& x) {
  Vector y(A.cols(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const double* r = A.row(i);
    for (std::size_t j = 0; j < A.cols(); ++j) y[j] += r[j] * x[i];
  }
  return y;
}

Matrix xtwx(const Matrix& A, const Vector& w) {
  const std::size_t p = A.cols();
  Matrix C(p, p, 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const double* r = A.row(i);
    const double wi = w.empty() ? 1.0 : w[i];
    for (std::size_t a = 0; a < p; ++a) {
      const double ra = wi * r[a];
      for (std::size_t b = a; b < p; ++b) C(a, b) += ra * r[b];
    }
  }
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < a; ++b) C(a, b) = C(b, a);
  return C;
}

Vector xtwz(const Matrix& A, const Vector& w, const Vector& z) {
  Vector y(A.cols(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const double* r = A.row(i);
    const double wz = (w.empty() ? 1.0 : w[i]) * z[i];
    for (std::size_t j = 0; j < A.cols(); ++j) y[j] += r[j] * wz;
  }
  return y;
}

namespace {

// LDL^T factorization in place; returns false on pivot collapse.
bool ldlt_factor(Matrix& A, double pivot_floor) {
  const std::size_t n = A.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double d = A(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= A(j, k) * A(j, k) * A(k, k);
    if (!(d > pivot_floor)) return false;
    A(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = A(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= A(i, k) * A(j, k) * A(k, k);
      A(i, j) = s / d;
    }
  }
  return true;
}

Vector ldlt_solve(const Matrix& F, const Vector& b) {
  const std::size_t n = F.rows();
  Vector x = b;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) x[i] -= F(i, k) * x[k];
  for (std::size_t i = 0; i < n; ++i) x[i] /= F(i, i);
  for (std::size_t ii = n; ii-- > 0;)
    for (std::size_t k = ii + 1; k < n; ++k) x[ii] -= F(k, ii) * x[k];
  return x;
}

}  // namespace

Vector solve_linear(const Matrix& A, const Vector& b) {
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw ShapeMismatch("solve_linear expects square A matching b");
  const std::size_t n = A.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(A(i, i)));
  const double pivot_floor = 1e-12 * std::max(max_diag, 1e-300);

  Matrix F = A;
  if (!ldlt_factor(F, pivot_floor)) throw SingularMatrix();

  Vector x = ldlt_solve(F, b);
  // One refinement pass tightens the residual on mildly ill-conditioned systems.
  Vector r = b;
  Vector ax = matvec(A, x);
  for (std::size_t i = 0; i < n; ++i) r[i] -= ax[i];
  Vector dx = ldlt_solve(F, r);
  for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
  return x;
}

Matrix spd_inverse(const Matrix& A) {
  const std::size_t n = A.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(A(i, i)));
  Matrix F = A;
  if (!ldlt_factor(F, 1e-12 * std::max(max_diag, 1e-300))) throw SingularMatrix();

  Matrix inv(n, n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    Vector e(n, 0.0);
    e[j] = 1.0;
    Vector col = ldlt_solve(F, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  // Symmetrize against roundoff.
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < a; ++b) {
      const double m = 0.5 * (inv(a, b) + inv(b, a));
      inv(a, b) = inv(b, a) = m;
    }
  return inv;
}

}  // namespace zinc
