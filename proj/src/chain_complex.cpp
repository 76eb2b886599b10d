#include "cotangent/chain_complex.hpp"

#include <sstream>

namespace cotangent {

std::string graded_dims_to_string(const GradedDims& g) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [deg, dim] : g) {
    if (!first) os << ", ";
    os << deg << ": " << dim;
    first = false;
  }
  os << "}";
  return os.str();
}

void ChainComplex::set_dim(int n, std::size_t dim) {
  if (dim == 0)
    dims_.erase(n);
  else
    dims_[n] = dim;
}

std::size_t ChainComplex::dim(int n) const {
  auto it = dims_.find(n);
  return it == dims_.end() ? 0 : it->second;
}

std::vector<int> ChainComplex::degrees() const {
  std::vector<int> out;
  for (const auto& [deg, dim] : dims_)
    if (dim > 0) out.push_back(deg);
  return out;
}

int ChainComplex::min_degree() const {
  return dims_.empty() ? 0 : dims_.begin()->first;
}

int ChainComplex::max_degree() const {
  return dims_.empty() ? 0 : dims_.rbegin()->first;
}

std::size_t ChainComplex::total_dim() const {
  std::size_t t = 0;
  for (const auto& [deg, dim] : dims_) t += dim;
  return t;
}

Matrix ChainComplex::diff(int n) const {
  auto it = d_.find(n);
  if (it != d_.end()) return it->second;
  return Matrix(dim(n + 1), dim(n));
}

void ChainComplex::set_diff(int n, Matrix m) {
  if (m.rows() != dim(n + 1) || m.cols() != dim(n))
    throw invariant_error("differential shape mismatch at degree " + std::to_string(n));
  d_[n] = std::move(m);
}

std::optional<int> ChainComplex::first_dsq_failure() const {
  for (int n : degrees()) {
    if (dim(n + 2) == 0 || dim(n) == 0) continue;
    Matrix sq = mat_mul(field, diff(n + 1), diff(n));
    if (!is_zero_matrix(field, sq)) return n;
  }
  return std::nullopt;
}

void ChainComplex::require_valid(const std::string& what) const {
  if (auto bad = first_dsq_failure())
    throw invariant_error(what + ": d^2 != 0 first at degree " + std::to_string(*bad));
}

GradedDims ChainComplex::cohomology() const {
  require_valid("cohomology");
  GradedDims h;
  for (int n : degrees()) {
    std::size_t cycles = dim(n) - rank(field, diff(n));
    std::size_t boundaries = rank(field, diff(n - 1));
    if (cycles > boundaries) h[n] = cycles - boundaries;
  }
  return h;
}

Matrix ChainComplex::cocycle_basis(int n) const { return kernel_basis(field, diff(n)); }

Matrix ChainComplex::coboundary_basis(int n) const {
  Matrix d = diff(n - 1);
  Rref r = rref(field, transpose(d));
  // Row space of d^T = column space of d; take the nonzero rows of the rref.
  Matrix b(dim(n), r.pivot_cols.size());
  for (std::size_t i = 0; i < r.pivot_cols.size(); ++i)
    for (std::size_t j = 0; j < dim(n); ++j) b.at(j, i) = r.r.at(i, j);
  return b;
}

long long ChainComplex::euler_characteristic() const {
  long long chi = 0;
  for (const auto& [deg, dim] : dims_)
    chi += (deg % 2 == 0) ? static_cast<long long>(dim) : -static_cast<long long>(dim);
  return chi;
}

ChainComplex shift(const ChainComplex& c, int k) {
  ChainComplex out(c.field);
  for (int n : c.degrees()) out.set_dim(n - k, c.dim(n));
  for (int n : c.degrees()) {
    Matrix d = c.diff(n);
    if (k % 2 != 0) d = mat_neg(c.field, d);
    if (d.rows() || d.cols()) out.set_diff(n - k, std::move(d));
  }
  return out;
}

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b) {
  if (a.field != b.field) throw invariant_error("direct_sum: field mismatch");
  ChainComplex out(a.field);
  int lo = std::min(a.min_degree(), b.min_degree());
  int hi = std::max(a.max_degree(), b.max_degree());
  for (int n = lo; n <= hi; ++n) out.set_dim(n, a.dim(n) + b.dim(n));
  for (int n = lo; n <= hi; ++n) {
    Matrix d(out.dim(n + 1), out.dim(n));
    Matrix da = a.diff(n), db = b.diff(n);
    for (std::size_t i = 0; i < da.rows(); ++i)
      for (std::size_t j = 0; j < da.cols(); ++j) d.at(i, j) = da.at(i, j);
    for (std::size_t i = 0; i < db.rows(); ++i)
      for (std::size_t j = 0; j < db.cols(); ++j)
        d.at(a.dim(n + 1) + i, a.dim(n) + j) = db.at(i, j);
    out.set_diff(n, std::move(d));
  }
  return out;
}

bool is_chain_map(const ChainComplex& a, const ChainComplex& b,
                  const std::map<int, Matrix>& f) {
  auto fmat = [&](int n) {
    auto it = f.find(n);
    if (it != f.end()) return it->second;
    return Matrix(b.dim(n), a.dim(n));
  };
  int lo = std::min(a.min_degree(), b.min_degree());
  int hi = std::max(a.max_degree(), b.max_degree());
  for (int n = lo; n <= hi; ++n) {
    Matrix lhs = mat_mul(b.field, b.diff(n), fmat(n));
    Matrix rhs = mat_mul(b.field, fmat(n + 1), a.diff(n));
    if (!(lhs == rhs) && !is_zero_matrix(b.field, mat_sub(b.field, lhs, rhs))) return false;
  }
  return true;
}

ChainComplex cone(const ChainComplex& a, const ChainComplex& b,
                  const std::map<int, Matrix>& f) {
  if (a.field != b.field) throw invariant_error("cone: field mismatch");
  const Field& K = a.field;
  ChainComplex out(K);
  int lo = std::min(a.min_degree() - 1, b.min_degree());
  int hi = std::max(a.max_degree() - 1, b.max_degree());
  for (int n = lo; n <= hi; ++n) out.set_dim(n, a.dim(n + 1) + b.dim(n));
  auto fmat = [&](int n) {
    auto it = f.find(n);
    if (it != f.end()) return it->second;
    return Matrix(b.dim(n), a.dim(n));
  };
  for (int n = lo; n <= hi; ++n) {
    std::size_t ra = a.dim(n + 2), rb = b.dim(n + 1);
    std::size_t ca = a.dim(n + 1), cb = b.dim(n);
    Matrix d(ra + rb, ca + cb);
    Matrix da = a.diff(n + 1), db = b.diff(n), fn = fmat(n + 1);
    for (std::size_t i = 0; i < ra; ++i)
      for (std::size_t j = 0; j < ca; ++j) d.at(i, j) = K.neg(da.at(i, j));
    for (std::size_t i = 0; i < rb; ++i)
      for (std::size_t j = 0; j < ca; ++j) d.at(ra + i, j) = fn.at(i, j);
    for (std::size_t i = 0; i < rb; ++i)
      for (std::size_t j = 0; j < cb; ++j) d.at(ra + i, ca + j) = db.at(i, j);
    out.set_diff(n, std::move(d));
  }
  return out;
}

ChainComplex dualize(const ChainComplex& c) {
  ChainComplex out(c.field);
  for (int n : c.degrees()) out.set_dim(-n, c.dim(n));
  for (int n : c.degrees()) {
    // d_out at degree -n-1 : (C^{n+1})^* -> (C^n)^* is d_n transposed.
    Matrix d = transpose(c.diff(n));
    if (d.rows() && d.cols()) out.set_diff(-n - 1, std::move(d));
  }
  return out;
}

ChainComplex tensor(const ChainComplex& a, const ChainComplex& b) {
  if (a.field != b.field) throw invariant_error("tensor: field mismatch");
  const Field& K = a.field;
  ChainComplex out(K);
  if (a.total_dim() == 0 || b.total_dim() == 0) return out;

  // Index bookkeeping: degree n basis = pairs (p, i, q, j) with p+q = n,
  // ordered by p then i then j.
  auto offset = [&](int n, int p) {
    std::size_t off = 0;
    for (int pp = a.min_degree(); pp < p; ++pp) off += a.dim(pp) * b.dim(n - pp);
    return off;
  };
  for (int n = a.min_degree() + b.min_degree(); n <= a.max_degree() + b.max_degree();
       ++n) {
    std::size_t dim = 0;
    for (int p = a.min_degree(); p <= a.max_degree(); ++p) dim += a.dim(p) * b.dim(n - p);
    out.set_dim(n, dim);
  }
  for (int n = out.min_degree(); n < out.max_degree() + 1; ++n) {
    Matrix d(out.dim(n + 1), out.dim(n));
    for (int p = a.min_degree(); p <= a.max_degree(); ++p) {
      int q = n - p;
      if (a.dim(p) == 0 || b.dim(q) == 0) continue;
      Matrix da = a.diff(p), db = b.diff(q);
      std::size_t src_base = offset(n, p);
      // d_a (x) 1
      if (a.dim(p + 1) > 0) {
        std::size_t dst_base = offset(n + 1, p + 1);
        for (std::size_t i = 0; i < a.dim(p + 1); ++i)
          for (std::size_t j = 0; j < a.dim(p); ++j) {
            if (K.is_zero(da.at(i, j))) continue;
            for (std::size_t k = 0; k < b.dim(q); ++k)
              d.at(dst_base + i * b.dim(q) + k, src_base + j * b.dim(q) + k) =
                  da.at(i, j);
          }
      }
      // (-1)^p (x) d_b
      if (b.dim(q + 1) > 0) {
        std::size_t dst_base = offset(n + 1, p);
        Scalar sgn = (p % 2 == 0) ? K.one() : K.neg(K.one());
        for (std::size_t j = 0; j < a.dim(p); ++j)
          for (std::size_t i = 0; i < b.dim(q + 1); ++i)
            for (std::size_t k = 0; k < b.dim(q); ++k) {
              if (K.is_zero(db.at(i, k))) continue;
              d.at(dst_base + j * b.dim(q + 1) + i, src_base + j * b.dim(q) + k) =
                  K.mul(sgn, db.at(i, k));
            }
      }
    }
    if (d.rows() || d.cols()) out.set_diff(n, std::move(d));
  }
  return out;
}

}  // namespace cotangent
