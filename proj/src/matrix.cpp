#include "cotangent/matrix.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace cotangent {

Matrix Matrix::identity(std::size_t n, const Field& f) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = f.one();
  return m;
}

Matrix mat_add(const Field& f, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw invariant_error("matrix shape mismatch in add");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.at(i, j) = f.add(a.at(i, j), b.at(i, j));
  return c;
}

Matrix mat_sub(const Field& f, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw invariant_error("matrix shape mismatch in sub");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.at(i, j) = f.sub(a.at(i, j), b.at(i, j));
  return c;
}

Matrix mat_neg(const Field& f, const Matrix& a) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.at(i, j) = f.neg(a.at(i, j));
  return c;
}

Matrix mat_scale(const Field& f, const Scalar& s, const Matrix& a) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.at(i, j) = f.mul(s, a.at(i, j));
  return c;
}

namespace {

// Over a prime field every entry is an int64 residue, so the product can run
// on raw integers with a single reduction per output entry.  Products fit in
// 63 bits (p < 2^31) and the 128-bit accumulator never overflows for any
// realistic inner dimension.
Matrix mat_mul_prime(std::int64_t p, const Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows(), m = b.cols(), k = a.cols();
  std::vector<std::int64_t> ra(n * k), rb(k * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) ra[i * k + t] = a.at(i, t).residue();
  for (std::size_t t = 0; t < k; ++t)
    for (std::size_t j = 0; j < m; ++j) rb[t * m + j] = b.at(t, j).residue();
  Matrix c(n, m);
  std::vector<unsigned __int128> acc(m);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t t = 0; t < k; ++t) {
      const std::int64_t x = ra[i * k + t];
      if (x == 0) continue;
      const std::int64_t* row = &rb[t * m];
      for (std::size_t j = 0; j < m; ++j) acc[j] += static_cast<unsigned __int128>(x) * row[j];
    }
    for (std::size_t j = 0; j < m; ++j) {
      const std::int64_t r = static_cast<std::int64_t>(acc[j] % static_cast<unsigned __int128>(p));
      if (r != 0) c.at(i, j) = Scalar(r);
    }
  }
  return c;
}

}  // namespace

Matrix mat_mul(const Field& f, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw invariant_error("matrix shape mismatch in mul");
  if (f.characteristic() > 0 && a.rows() * b.cols() > 64)
    return mat_mul_prime(f.characteristic(), a, b);
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (f.is_zero(a.at(i, k))) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (f.is_zero(b.at(k, j))) continue;
        c.at(i, j) = f.add(c.at(i, j), f.mul(a.at(i, k), b.at(k, j)));
      }
    }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix c(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.at(j, i) = a.at(i, j);
  return c;
}

bool is_zero_matrix(const Field& f, const Matrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!f.is_zero(a.at(i, j))) return false;
  return true;
}

std::vector<Scalar> mat_apply(const Field& f, const Matrix& a,
                              const std::vector<Scalar>& x) {
  if (a.cols() != x.size()) throw invariant_error("matrix/vector shape mismatch");
  std::vector<Scalar> y(a.rows(), f.zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (f.is_zero(a.at(i, j)) || f.is_zero(x[j])) continue;
      y[i] = f.add(y[i], f.mul(a.at(i, j), x[j]));
    }
  return y;
}

namespace {

std::int64_t mod_inv(std::int64_t a, std::int64_t p) {
  std::int64_t t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  return t < 0 ? t + p : t;
}

// Same elimination as the generic path (first nonzero entry at or below the
// current row picks the pivot), run on raw residues.
Rref rref_prime(std::int64_t p, const Matrix& a0) {
  const std::size_t n = a0.rows(), m = a0.cols();
  std::vector<std::int64_t> a(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) a[i * m + j] = a0.at(i, j).residue();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m && row < n; ++col) {
    std::size_t sel = n;
    for (std::size_t i = row; i < n; ++i)
      if (a[i * m + col] != 0) {
        sel = i;
        break;
      }
    if (sel == n) continue;
    if (sel != row)
      for (std::size_t j = 0; j < m; ++j) std::swap(a[sel * m + j], a[row * m + j]);
    const std::int64_t inv = mod_inv(a[row * m + col], p);
    for (std::size_t j = col; j < m; ++j) a[row * m + j] = (a[row * m + j] * inv) % p;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row) continue;
      const std::int64_t c = a[i * m + col];
      if (c == 0) continue;
      for (std::size_t j = col; j < m; ++j) {
        std::int64_t v = (a[i * m + j] - c * a[row * m + j] % p) % p;
        if (v < 0) v += p;
        a[i * m + j] = v;
      }
    }
    pivots.push_back(col);
    ++row;
  }
  Matrix out(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (a[i * m + j] != 0) out.at(i, j) = Scalar(a[i * m + j]);
  return Rref{std::move(out), std::move(pivots)};
}

}  // namespace

Rref rref(const Field& f, Matrix a) {
  if (f.characteristic() > 0 && a.rows() * a.cols() > 64) return rref_prime(f.characteristic(), a);
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    // First nonzero entry at or below `row` in this column.
    std::size_t sel = a.rows();
    for (std::size_t i = row; i < a.rows(); ++i)
      if (!f.is_zero(a.at(i, col))) {
        sel = i;
        break;
      }
    if (sel == a.rows()) continue;
    if (sel != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a.at(sel, j), a.at(row, j));
    Scalar piv_inv = f.inv(a.at(row, col));
    for (std::size_t j = col; j < a.cols(); ++j)
      a.at(row, j) = f.mul(piv_inv, a.at(row, j));
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || f.is_zero(a.at(i, col))) continue;
      Scalar c = a.at(i, col);
      for (std::size_t j = col; j < a.cols(); ++j)
        a.at(i, j) = f.sub(a.at(i, j), f.mul(c, a.at(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  return Rref{std::move(a), std::move(pivots)};
}

std::size_t rank(const Field& f, const Matrix& a) {
  return rref(f, a).pivot_cols.size();
}

Matrix kernel_basis(const Field& f, const Matrix& a) {
  Rref r = rref(f, a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t c : r.pivot_cols) is_pivot[c] = true;
  std::size_t nullity = a.cols() - r.pivot_cols.size();
  Matrix k(a.cols(), nullity);
  std::size_t out = 0;
  for (std::size_t free_col = 0; free_col < a.cols(); ++free_col) {
    if (is_pivot[free_col]) continue;
    k.at(free_col, out) = f.one();
    for (std::size_t pi = 0; pi < r.pivot_cols.size(); ++pi)
      k.at(r.pivot_cols[pi], out) = f.neg(r.r.at(pi, free_col));
    ++out;
  }
  return k;
}

std::optional<std::vector<Scalar>> solve(const Field& f, const Matrix& a,
                                         const std::vector<Scalar>& b) {
  if (a.rows() != b.size()) throw invariant_error("solve shape mismatch");
  Matrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, a.cols()) = b[i];
  }
  Rref r = rref(f, std::move(aug));
  for (std::size_t c : r.pivot_cols)
    if (c == a.cols()) return std::nullopt;  // row [0 ... 0 | 1]
  std::vector<Scalar> x(a.cols(), f.zero());
  for (std::size_t pi = 0; pi < r.pivot_cols.size(); ++pi)
    x[r.pivot_cols[pi]] = r.r.at(pi, a.cols());
  return x;
}

std::optional<Matrix> solve_matrix(const Field& f, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw invariant_error("solve shape mismatch");
  Matrix x(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto xj = solve(f, a, column_of(b, j));
    if (!xj) return std::nullopt;
    for (std::size_t i = 0; i < a.cols(); ++i) x.at(i, j) = (*xj)[i];
  }
  return x;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw invariant_error("hstack shape mismatch");
  Matrix c(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) c.at(i, a.cols() + j) = b.at(i, j);
  }
  return c;
}

Matrix mat_from_columns(const std::vector<std::vector<Scalar>>& cols, std::size_t rows) {
  Matrix c(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw invariant_error("column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) c.at(i, j) = cols[j][i];
  }
  return c;
}

std::vector<Scalar> column_of(const Matrix& a, std::size_t j) {
  std::vector<Scalar> v(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) v[i] = a.at(i, j);
  return v;
}

Scalar determinant(const Field& f, Matrix a) {
  if (a.rows() != a.cols()) throw invariant_error("determinant of non-square matrix");
  Scalar det = f.one();
  std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = n;
    for (std::size_t i = col; i < n; ++i)
      if (!f.is_zero(a.at(i, col))) {
        sel = i;
        break;
      }
    if (sel == n) return f.zero();
    if (sel != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a.at(sel, j), a.at(col, j));
      det = f.neg(det);
    }
    det = f.mul(det, a.at(col, col));
    Scalar piv_inv = f.inv(a.at(col, col));
    for (std::size_t i = col + 1; i < n; ++i) {
      if (f.is_zero(a.at(i, col))) continue;
      Scalar c = f.mul(piv_inv, a.at(i, col));
      for (std::size_t j = col; j < n; ++j)
        a.at(i, j) = f.sub(a.at(i, j), f.mul(c, a.at(col, j)));
    }
  }
  return det;
}

std::optional<Matrix> inverse(const Field& f, const Matrix& a) {
  if (a.rows() != a.cols()) throw invariant_error("inverse of non-square matrix");
  auto x = solve_matrix(f, a, Matrix::identity(a.rows(), f));
  if (!x) return std::nullopt;
  // solve_matrix finds some preimage; for invertibility the rank must be full.
  if (rank(f, a) != a.rows()) return std::nullopt;
  return x;
}

Matrix mat_pow(const Field& f, const Matrix& a, long n) {
  if (a.rows() != a.cols()) throw invariant_error("power of non-square matrix");
  Matrix base = a;
  if (n < 0) {
    auto inv = inverse(f, a);
    if (!inv) throw invariant_error("negative power of singular matrix");
    base = *inv;
    n = -n;
  }
  Matrix result = Matrix::identity(a.rows(), f);
  while (n > 0) {
    if (n & 1) result = mat_mul(f, result, base);
    base = mat_mul(f, base, base);
    n >>= 1;
  }
  return result;
}

}  // namespace cotangent
