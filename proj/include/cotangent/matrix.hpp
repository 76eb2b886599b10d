#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cotangent/field.hpp"

namespace cotangent {

// Dense matrix over an exact field. Deliberately field-agnostic storage; the
// field is passed to every operation (mirrors how Scalar works).
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Matrix identity(std::size_t n, const Field& f);
  static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Scalar& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Scalar> a_;
};

Matrix mat_add(const Field& f, const Matrix& a, const Matrix& b);
Matrix mat_sub(const Field& f, const Matrix& a, const Matrix& b);
Matrix mat_neg(const Field& f, const Matrix& a);
Matrix mat_scale(const Field& f, const Scalar& c, const Matrix& a);
Matrix mat_mul(const Field& f, const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
bool is_zero_matrix(const Field& f, const Matrix& a);

std::vector<Scalar> mat_apply(const Field& f, const Matrix& a,
                              const std::vector<Scalar>& x);

// Reduced row echelon form. Pivoting is deterministic: columns are scanned
// left to right and the first row with a nonzero entry is used.
struct Rref {
  Matrix r;
  std::vector<std::size_t> pivot_cols;
};
Rref rref(const Field& f, Matrix a);

std::size_t rank(const Field& f, const Matrix& a);

// Columns form a basis of ker(a). Deterministic: free variables in column
// order, each set to 1 in turn.
Matrix kernel_basis(const Field& f, const Matrix& a);

// One solution of a x = b, or nullopt if inconsistent. Free variables are 0,
// so the solution is deterministic; when the kernel is trivial it is the
// unique one.
std::optional<std::vector<Scalar>> solve(const Field& f, const Matrix& a,
                                         const std::vector<Scalar>& b);

// Solve a X = B columnwise; nullopt if any column is inconsistent.
std::optional<Matrix> solve_matrix(const Field& f, const Matrix& a, const Matrix& b);

Matrix hstack(const Matrix& a, const Matrix& b);
Matrix mat_from_columns(const std::vector<std::vector<Scalar>>& cols, std::size_t rows);
std::vector<Scalar> column_of(const Matrix& a, std::size_t j);

// Determinant via fraction-free elimination is not needed; plain Gaussian
// elimination over the field is exact here.
Scalar determinant(const Field& f, Matrix a);

std::optional<Matrix> inverse(const Field& f, const Matrix& a);

// a^n for integer n; negative powers require invertibility (invariant_error
// otherwise).
Matrix mat_pow(const Field& f, const Matrix& a, long n);

}  // namespace cotangent
