#include "cotangent/sdr.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cotangent {

namespace {

Matrix map_at(const std::map<int, Matrix>& m, int n, std::size_t rows,
              std::size_t cols) {
  auto it = m.find(n);
  if (it == m.end()) return Matrix::zero(rows, cols);
  return it->second;
}

Matrix take(const Matrix& m, const std::vector<std::size_t>& rows,
            const std::vector<std::size_t>& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out.at(i, j) = m.at(rows[i], cols[j]);
  return out;
}

std::vector<std::size_t> complement(const std::vector<std::size_t>& chosen,
                                    std::size_t n) {
  std::vector<bool> in(n, false);
  for (auto k : chosen) in[k] = true;
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < n; ++k)
    if (!in[k]) out.push_back(k);
  return out;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = k;
  return out;
}

}  // namespace

Matrix Sdr::include_at(int n) const {
  return map_at(include, n, big.dim(n), small.dim(n));
}

Matrix Sdr::project_at(int n) const {
  return map_at(project, n, small.dim(n), big.dim(n));
}

Matrix Sdr::homotopy_at(int n) const {
  return map_at(homotopy, n, big.dim(n - 1), big.dim(n));
}

Sdr gaussian_sdr(const ChainComplex& c) {
  const Field& f = c.field;
  c.require_valid("gaussian elimination input");

  std::map<int, std::size_t> cur_dims;
  std::map<int, Matrix> cur_d;  // keyed by source degree
  for (int n : c.degrees()) cur_dims[n] = c.dim(n);
  for (int n : c.degrees()) cur_d[n] = c.diff(n);

  auto cdim = [&](int n) -> std::size_t {
    auto it = cur_dims.find(n);
    return it == cur_dims.end() ? 0 : it->second;
  };

  // Accumulated maps between the original complex and the current one.
  std::map<int, Matrix> ai, ap, ah;  // include: cur->big, project: big->cur
  for (int n : c.degrees()) {
    ai[n] = Matrix::identity(c.dim(n), f);
    ap[n] = Matrix::identity(c.dim(n), f);
  }
  auto ai_at = [&](int n) { return map_at(ai, n, c.dim(n), cdim(n)); };
  auto ap_at = [&](int n) { return map_at(ap, n, cdim(n), c.dim(n)); };
  auto ah_at = [&](int n) { return map_at(ah, n, c.dim(n - 1), c.dim(n)); };

  for (int n : c.degrees()) {
    std::size_t a = cdim(n), b = cdim(n + 1);
    if (a == 0 || b == 0) continue;
    Matrix d = map_at(cur_d, n, b, a);
    if (is_zero_matrix(f, d)) continue;

    // Pivot structure: S = independent columns, R = rows making d[R,S]
    // invertible.
    std::vector<std::size_t> s_cols = rref(f, d).pivot_cols;
    Matrix d_s = take(d, all_indices(b), s_cols);
    std::vector<std::size_t> r_rows = rref(f, transpose(d_s)).pivot_cols;
    std::size_t r = s_cols.size();
    if (r_rows.size() != r)
      throw invariant_error("gaussian elimination: pivot rank mismatch");
    std::vector<std::size_t> s_rest = complement(s_cols, a);
    std::vector<std::size_t> r_rest = complement(r_rows, b);

    Matrix block_a = take(d, r_rows, s_cols);
    auto inv_a = inverse(f, block_a);
    if (!inv_a)
      throw invariant_error("gaussian elimination: pivot block not invertible");
    Matrix block_b = take(d, r_rows, s_rest);
    Matrix block_c = take(d, r_rest, s_cols);
    Matrix block_e = take(d, r_rest, s_rest);
    Matrix ainv_b = mat_mul(f, *inv_a, block_b);
    Matrix c_ainv = mat_mul(f, block_c, *inv_a);

    // Step maps for the elementary retraction at (n, n+1).
    Matrix si_n(a, a - r);  // cur^n <- new^n
    for (std::size_t j = 0; j < s_rest.size(); ++j) {
      si_n.at(s_rest[j], j) = f.one();
      for (std::size_t i = 0; i < r; ++i)
        si_n.at(s_cols[i], j) = f.neg(ainv_b.at(i, j));
    }
    Matrix si_n1(b, b - r);
    for (std::size_t j = 0; j < r_rest.size(); ++j)
      si_n1.at(r_rest[j], j) = f.one();
    Matrix sp_n(a - r, a);
    for (std::size_t j = 0; j < s_rest.size(); ++j)
      sp_n.at(j, s_rest[j]) = f.one();
    Matrix sp_n1(b - r, b);
    for (std::size_t j = 0; j < r_rest.size(); ++j) {
      sp_n1.at(j, r_rest[j]) = f.one();
      for (std::size_t i = 0; i < r; ++i)
        sp_n1.at(j, r_rows[i]) = f.neg(c_ainv.at(j, i));
    }
    Matrix sh(a, b);  // cur^{n+1} -> cur^n
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        sh.at(s_cols[i], r_rows[j]) = inv_a->at(i, j);

    // Accumulate (old maps first, then overwrite).
    Matrix ah_new = mat_add(f, ah_at(n + 1),
                            mat_mul(f, ai_at(n), mat_mul(f, sh, ap_at(n + 1))));
    ai[n] = mat_mul(f, ai_at(n), si_n);
    ai[n + 1] = mat_mul(f, ai_at(n + 1), si_n1);
    ap[n] = mat_mul(f, sp_n, ap_at(n));
    ap[n + 1] = mat_mul(f, sp_n1, ap_at(n + 1));
    ah[n + 1] = ah_new;

    // Updated complex: Schur complement at n (must vanish at full pivot
    // rank), restricted neighbours.
    Matrix schur = mat_sub(f, block_e, mat_mul(f, block_c, ainv_b));
    if (!is_zero_matrix(f, schur))
      throw invariant_error("gaussian elimination: residual differential");
    if (cdim(n - 1) > 0) {
      Matrix below = map_at(cur_d, n - 1, a, cdim(n - 1));
      cur_d[n - 1] = take(below, s_rest, all_indices(cdim(n - 1)));
    }
    if (cdim(n + 2) > 0) {
      Matrix above = map_at(cur_d, n + 1, cdim(n + 2), b);
      cur_d[n + 1] = take(above, all_indices(cdim(n + 2)), r_rest);
    }
    cur_d[n] = Matrix::zero(b - r, a - r);
    cur_dims[n] = a - r;
    cur_dims[n + 1] = b - r;
  }

  ChainComplex small(f);
  for (auto& [n, dim] : cur_dims) {
    small.set_dim(n, dim);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < dim; ++j)
      names.push_back("h" + std::to_string(n) + "[" + std::to_string(j) + "]");
    if (dim > 0) small.labels[n] = names;
  }
  small.require_valid("gaussian elimination output");

  Sdr out(c, std::move(small));
  for (auto& [n, m] : ai)
    if (m.cols() > 0 && m.rows() > 0) out.include[n] = m;
  for (auto& [n, m] : ap)
    if (m.cols() > 0 && m.rows() > 0) out.project[n] = m;
  for (auto& [n, m] : ah)
    if (m.cols() > 0 && m.rows() > 0) out.homotopy[n] = m;
  return out;
}

void validate_sdr(const Sdr& s) {
  const Field& f = s.big.field;
  s.big.require_valid("retract big complex");
  s.small.require_valid("retract small complex");
  int lo = std::min(s.big.min_degree(), s.small.min_degree()) - 1;
  int hi = std::max(s.big.max_degree(), s.small.max_degree()) + 1;
  for (int n = lo; n <= hi; ++n) {
    Matrix i_n = s.include_at(n), p_n = s.project_at(n), h_n = s.homotopy_at(n);
    if (s.small.dim(n) > 0 &&
        !(mat_mul(f, p_n, i_n) == Matrix::identity(s.small.dim(n), f)))
      throw invariant_error("retract: project.include != 1 in degree " +
                            std::to_string(n));
    // Chain maps.
    Matrix di = mat_mul(f, s.big.diff(n), i_n);
    Matrix id = mat_mul(f, s.include_at(n + 1), s.small.diff(n));
    if (!(di == id))
      throw invariant_error("retract: include is not a chain map in degree " +
                            std::to_string(n));
    Matrix pd = mat_mul(f, s.project_at(n + 1), s.big.diff(n));
    Matrix dp = mat_mul(f, s.small.diff(n), p_n);
    if (!(pd == dp))
      throw invariant_error("retract: project is not a chain map in degree " +
                            std::to_string(n));
    // Homotopy identity dh + hd = 1 - ip.
    if (s.big.dim(n) > 0) {
      Matrix dh = mat_mul(f, s.big.diff(n - 1), h_n);
      Matrix hd = mat_mul(f, s.homotopy_at(n + 1), s.big.diff(n));
      Matrix lhs = mat_add(f, dh, hd);
      Matrix rhs = mat_sub(f, Matrix::identity(s.big.dim(n), f),
                           mat_mul(f, i_n, p_n));
      if (!(lhs == rhs))
        throw invariant_error("retract: dh + hd != 1 - ip in degree " +
                              std::to_string(n));
    }
    // Side conditions.
    if (!is_zero_matrix(f, mat_mul(f, h_n, s.include_at(n))))
      throw invariant_error("retract: homotopy.include != 0 in degree " +
                            std::to_string(n));
    if (!is_zero_matrix(f, mat_mul(f, p_n, s.homotopy_at(n + 1))))
      throw invariant_error("retract: project.homotopy != 0 in degree " +
                            std::to_string(n));
    if (!is_zero_matrix(f, mat_mul(f, h_n, s.homotopy_at(n + 1))))
      throw invariant_error("retract: homotopy.homotopy != 0 in degree " +
                            std::to_string(n));
  }
}

Sdr perturb_sdr(const Sdr& s, const std::map<int, Matrix>& delta, int cap) {
  const Field& f = s.big.field;
  auto delta_at = [&](int n) {
    return map_at(delta, n, s.big.dim(n + 1), s.big.dim(n));
  };

  int lo = s.big.min_degree(), hi = s.big.max_degree();
  // T = delta - delta.h.delta + delta.h.delta.h.delta - ... ; terms keyed by
  // source degree.  The series alternates because the homotopy here satisfies
  // dh + hd = 1 - ip; the non-alternating series belongs to the opposite
  // orientation dh + hd = ip - 1.
  std::map<int, Matrix> total, term;
  for (int n = lo; n <= hi; ++n) {
    term[n] = delta_at(n);
    total[n] = term[n];
  }
  for (int round = 0;; ++round) {
    bool nonzero = false;
    std::map<int, Matrix> next;
    for (int n = lo; n <= hi; ++n) {
      Matrix m = mat_neg(
          f, mat_mul(f, delta_at(n), mat_mul(f, s.homotopy_at(n + 1), term[n])));
      if (!is_zero_matrix(f, m)) nonzero = true;
      next[n] = m;
    }
    if (!nonzero) break;
    if (round >= cap)
      throw invariant_error(
          "perturbation series did not terminate: homotopy does not lower the "
          "filtration");
    term = next;
    for (int n = lo; n <= hi; ++n) total[n] = mat_add(f, total[n], term[n]);
  }
  auto t_at = [&](int n) {
    auto it = total.find(n);
    if (it == total.end()) return Matrix::zero(s.big.dim(n + 1), s.big.dim(n));
    return it->second;
  };

  ChainComplex big2 = s.big;
  for (int n = lo; n <= hi; ++n)
    big2.set_diff(n, mat_add(f, s.big.diff(n), delta_at(n)));
  big2.require_valid("perturbed complex");

  ChainComplex small2 = s.small;
  for (int n = lo; n <= hi; ++n) {
    Matrix extra =
        mat_mul(f, s.project_at(n + 1), mat_mul(f, t_at(n), s.include_at(n)));
    small2.set_diff(n, mat_add(f, s.small.diff(n), extra));
  }
  small2.require_valid("transferred differential");

  // Corrections to include/project/homotopy are subtracted, again matching
  // the dh + hd = 1 - ip orientation.
  Sdr out(std::move(big2), std::move(small2));
  for (int n = lo; n <= hi; ++n) {
    if (s.big.dim(n) == 0) continue;
    Matrix i2 = mat_sub(
        f, s.include_at(n),
        mat_mul(f, s.homotopy_at(n + 1), mat_mul(f, t_at(n), s.include_at(n))));
    Matrix p2 = mat_sub(
        f, s.project_at(n),
        mat_mul(f, s.project_at(n), mat_mul(f, t_at(n - 1), s.homotopy_at(n))));
    Matrix h2 = mat_sub(
        f, s.homotopy_at(n),
        mat_mul(f, s.homotopy_at(n), mat_mul(f, t_at(n - 1), s.homotopy_at(n))));
    if (!is_zero_matrix(f, i2)) out.include[n] = i2;
    if (!is_zero_matrix(f, p2)) out.project[n] = p2;
    if (!is_zero_matrix(f, h2)) out.homotopy[n] = h2;
  }
  return out;
}

}  // namespace cotangent
