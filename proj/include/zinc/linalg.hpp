#ifndef ZINC_LINALG_HPP
#define ZINC_LINALG_HPP

#include <cstddef>
#include <vector>

namespace zinc {

using Vector = std::vector<double>;

// Dense row-major matrix. Dimensions here are tiny (design matrices are
// n x (p+1) with p <= ~10), so no blocking or sparsity.
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

  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  double* row(std::size_t i) { return data_.data() + i * cols_; }

  bool operator==(const Matrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(const Vector& a, const Vector& b);
double max_abs(const Vector& v);

// y = A x
Vector matvec(const Matrix& A, const Vector& x);
// y = A^T x
Vector tmatvec(const Matrix& A, const Vector& x);
// A^T diag(w) A  (w may be empty meaning all-ones)
Matrix xtwx(const Matrix& A, const Vector& w = {});
// A^T diag(w) z
Vector xtwz(const Matrix& A, const Vector& w, const Vector& z);

// Solve A x = b for symmetric positive-definite A via LDL^T with a relative
// pivot threshold of 1e-12; one step of iterative refinement keeps the
// residual max-norm within 1e-8 * (1 + |b|) on well-conditioned systems.
// Throws SingularMatrix when a pivot collapses.
Vector solve_linear(const Matrix& A, const Vector& b);

// Inverse of a symmetric positive-definite matrix (column-by-column solves).
Matrix spd_inverse(const Matrix& A);

}  // namespace zinc

#endif  // ZINC_LINALG_HPP
