#include "cotangent/bar_cobar.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace cotangent {

namespace {

Scalar sign_pow(const Field& f, long long e) {
  return ((e % 2) + 2) % 2 == 0 ? f.one() : f.neg(f.one());
}

void madd(const Field& f, Matrix& m, std::size_t i, std::size_t j, const Scalar& c) {
  m.at(i, j) = f.add(m.at(i, j), c);
}

// Prefix sums of the shifted degrees (ideal degree - 1) of a word's letters:
// pre[t] covers the first t letters, pre[0] = 0.
std::vector<int> shifted_prefixes(const std::vector<int>& letter_degrees) {
  std::vector<int> pre(letter_degrees.size() + 1, 0);
  for (std::size_t t = 0; t < letter_degrees.size(); ++t)
    pre[t + 1] = pre[t] + (letter_degrees[t] - 1);
  return pre;
}

struct IdealData {
  ChainComplex complex;
  std::vector<std::vector<Simplex>> cells;  // per degree, lexicographic
};

// The augmentation ideal of the Čech dg algebra is spanned by every
// generator except the base vertex's own; it is closed under d because the
// differential raises degree and the missing generator sits in degree 0.
IdealData build_ideal(const CechDga& a) {
  IdealData out{ChainComplex(a.field()), {}};
  const int dmax = a.space().dim();
  out.cells.assign(static_cast<std::size_t>(dmax) + 1, {});
  for (const Simplex& s : a.ideal_basis())
    out.cells[static_cast<std::size_t>(CechDga::degree(s))].push_back(s);
  for (int k = 0; k <= dmax; ++k) {
    out.complex.set_dim(k, out.cells[static_cast<std::size_t>(k)].size());
    std::vector<std::string> names;
    for (const Simplex& s : out.cells[static_cast<std::size_t>(k)])
      names.push_back(simplex_to_string(s));
    out.complex.labels[k] = std::move(names);
  }
  const Field& f = a.field();
  for (int k = 0; k < dmax; ++k) {
    const auto& src = out.cells[static_cast<std::size_t>(k)];
    const auto& dst = out.cells[static_cast<std::size_t>(k) + 1];
    if (src.empty() || dst.empty()) continue;
    Matrix m(dst.size(), src.size());
    for (std::size_t j = 0; j < src.size(); ++j)
      for (const auto& [t, c] : a.d(a.gen(src[j]))) {
        auto it = std::lower_bound(dst.begin(), dst.end(), t);
        if (it == dst.end() || *it != t)
          throw invariant_error("ideal differential left the ideal basis");
        madd(f, m, static_cast<std::size_t>(it - dst.begin()), j, c);
      }
    out.complex.set_diff(k, std::move(m));
  }
  out.complex.require_valid("augmentation ideal complex");
  return out;
}

std::size_t position_in(const std::vector<Simplex>& cells, const Simplex& s) {
  auto it = std::lower_bound(cells.begin(), cells.end(), s);
  if (it == cells.end() || *it != s)
    throw invariant_error("simplex missing from its expected basis");
  return static_cast<std::size_t>(it - cells.begin());
}

bool all_zero(const Field& f, const std::vector<Scalar>& v) {
  for (const Scalar& x : v)
    if (!f.is_zero(x)) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Connectivity, windows, probe
// ---------------------------------------------------------------------------

std::optional<int> ideal_connectivity(const CechDga& algebra) {
  if (!algebra.space().is_connected())
    throw parse_error("the base space is not connected");
  GradedDims h = build_ideal(algebra).complex.cohomology();
  std::optional<int> best;
  for (const auto& [deg, dim] : h)
    if (dim > 0 && (!best || deg < *best)) best = deg;
  return best;
}

std::optional<int> resolution_window_max(std::optional<int> gamma, int word_bound) {
  if (!gamma) return std::nullopt;
  return (word_bound + 1) * (*gamma - 1);
}

std::optional<int> coalgebra_window_max(std::optional<int> gamma, int word_bound) {
  if (!gamma) return std::nullopt;
  return (word_bound + 1) * (*gamma - 1) - 1;
}

std::optional<int> dual_window_min(std::optional<int> gamma, int word_bound) {
  if (!gamma) return std::nullopt;
  return 1 - (word_bound + 1) * (*gamma - 1);
}

std::optional<int> endomorphism_window_min(std::optional<int> gamma, int word_bound) {
  if (!gamma) return std::nullopt;
  return 1 - word_bound * (*gamma - 1);
}

bool simply_connected_probe(const SimplicialComplex& space) {
  if (!space.is_connected()) return false;
  const Field fields[] = {Field::rationals(), Field::prime(2), Field::prime(3),
                          Field::prime(5)};
  for (const Field& f : fields) {
    GradedDims h = space.cochain_complex(f).cohomology();
    auto it = h.find(1);
    if (it != h.end() && it->second > 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// BarConstruction
// ---------------------------------------------------------------------------

BarConstruction::BarConstruction(const CechDga& algebra, int word_bound,
                                 std::size_t basis_cap)
    : algebra_(&algebra),
      word_bound_(word_bound),
      basis_cap_(basis_cap),
      coalgebra_(algebra.field()),
      resolution_(algebra.field()) {
  if (word_bound < 0) throw parse_error("word bound must be nonnegative");
  if (!algebra.space().is_connected())
    throw parse_error("the base space is not connected");
  const Field& f = algebra.field();
  const std::vector<Simplex>& letters = algebra.ideal_basis();

  // Enumerate words of length <= word_bound, shortest first, letters in
  // ideal_basis order.
  std::vector<BarWord> frontier = {BarWord{}};
  std::vector<BarWord> words = frontier;
  for (int len = 1; len <= word_bound_; ++len) {
    std::vector<BarWord> next;
    for (const BarWord& u : frontier)
      for (std::size_t k = 0; k < letters.size(); ++k) {
        BarWord v = u;
        v.push_back(k);
        next.push_back(std::move(v));
      }
    words.insert(words.end(), next.begin(), next.end());
    if (words.size() > basis_cap_) {
      std::ostringstream os;
      os << "truncated bar basis needs more than " << basis_cap_
         << " words; use the transferred model";
      throw parse_error(os.str());
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  for (BarWord& u : words) {
    int deg = word_degree(u);
    auto& bucket = coalgebra_basis_[deg];
    coalgebra_index_[u] = {deg, bucket.size()};
    bucket.push_back(std::move(u));
  }

  for (const auto& [deg, bucket] : coalgebra_basis_) {
    coalgebra_.set_dim(deg, bucket.size());
    std::vector<std::string> names;
    for (const BarWord& u : bucket) names.push_back(word_name(u));
    coalgebra_.labels[deg] = std::move(names);
  }

  // d-expansion of each letter in letter coordinates.
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> letter_d(letters.size());
  for (std::size_t k = 0; k < letters.size(); ++k)
    for (const auto& [t, c] : algebra.d(algebra.gen(letters[k]))) {
      auto idx = algebra.ideal_index(t);
      if (!idx) throw invariant_error("ideal differential left the ideal basis");
      letter_d[k].push_back({*idx, c});
    }

  for (const auto& [n, bucket] : coalgebra_basis_) {
    auto up = coalgebra_basis_.find(n + 1);
    if (up == coalgebra_basis_.end() || up->second.empty()) continue;
    Matrix m(up->second.size(), bucket.size());
    for (std::size_t j = 0; j < bucket.size(); ++j) {
      const BarWord& u = bucket[j];
      const std::size_t k = u.size();
      std::vector<int> degs(k);
      for (std::size_t t = 0; t < k; ++t)
        degs[t] = CechDga::degree(letters[u[t]]);
      const std::vector<int> pre = shifted_prefixes(degs);
      // Differentiate one letter: -(-1)^{pre[t]}.
      for (std::size_t t = 0; t < k; ++t)
        for (const auto& [tgt, c] : letter_d[u[t]]) {
          BarWord v = u;
          v[t] = tgt;
          const auto& [vd, vp] = coalgebra_index_.at(v);
          (void)vd;
          madd(f, m, vp, j, f.mul(f.neg(sign_pow(f, pre[t])), c));
        }
      // Merge adjacent letters: (-1)^{pre[t+1]}.
      for (std::size_t t = 0; t + 1 < k; ++t) {
        auto pr = algebra.mul_basis(letters[u[t]], letters[u[t + 1]]);
        if (!pr) continue;
        auto idx = algebra.ideal_index(pr->first);
        if (!idx) throw invariant_error("letter product left the augmentation ideal");
        BarWord v;
        v.reserve(k - 1);
        v.insert(v.end(), u.begin(), u.begin() + static_cast<long>(t));
        v.push_back(*idx);
        v.insert(v.end(), u.begin() + static_cast<long>(t) + 2, u.end());
        const auto& [vd, vp] = coalgebra_index_.at(v);
        (void)vd;
        madd(f, m, vp, j, f.mul(sign_pow(f, pre[t + 1]), pr->second));
      }
    }
    coalgebra_.set_diff(n, std::move(m));
  }
  coalgebra_.require_valid("truncated tensor coalgebra");
}

int BarConstruction::word_degree(const BarWord& u) const {
  int deg = 0;
  for (std::size_t k : u)
    deg += CechDga::degree(algebra_->ideal_basis()[k]) - 1;
  return deg;
}

std::string BarConstruction::word_name(const BarWord& u) const {
  std::ostringstream os;
  os << "[";
  for (std::size_t t = 0; t < u.size(); ++t) {
    if (t) os << "|";
    os << simplex_to_string(algebra_->ideal_basis()[u[t]]);
  }
  os << "]";
  return os.str();
}

const std::vector<BarWord>& BarConstruction::coalgebra_basis(int degree) const {
  static const std::vector<BarWord> empty;
  auto it = coalgebra_basis_.find(degree);
  return it == coalgebra_basis_.end() ? empty : it->second;
}

std::optional<std::size_t> BarConstruction::coalgebra_index(const BarWord& u) const {
  auto it = coalgebra_index_.find(u);
  if (it == coalgebra_index_.end()) return std::nullopt;
  return it->second.second;
}

const ChainComplex& BarConstruction::resolution() const {
  build_resolution();
  return resolution_;
}

const std::vector<BarConstruction::ResolutionBasisElement>&
BarConstruction::resolution_basis(int degree) const {
  build_resolution();
  static const std::vector<ResolutionBasisElement> empty;
  auto it = resolution_basis_.find(degree);
  return it == resolution_basis_.end() ? empty : it->second;
}

std::optional<std::size_t> BarConstruction::resolution_index(
    const BarWord& u, const Simplex& cell) const {
  build_resolution();
  auto it = resolution_index_.find({u, cell});
  if (it == resolution_index_.end()) return std::nullopt;
  return it->second.second;
}

void BarConstruction::build_resolution() const {
  if (resolution_built_) return;
  const CechDga& a = *algebra_;
  const Field& f = a.field();
  const std::vector<Simplex>& letters = a.ideal_basis();
  const SimplicialComplex& space = a.space();

  std::size_t n_words = 0;
  for (const auto& [deg, bucket] : coalgebra_basis_) n_words += bucket.size();
  if (n_words * space.total_simplices() > basis_cap_) {
    std::ostringstream os;
    os << "truncated resolution basis needs more than " << basis_cap_
       << " elements; use the transferred model";
    throw parse_error(os.str());
  }

  // Basis: words crossed with the algebra's cells, bucketed by total degree.
  for (const auto& [wdeg, bucket] : coalgebra_basis_)
    for (const BarWord& u : bucket)
      for (int k = 0; k <= space.dim(); ++k)
        for (const Simplex& s : space.simplices(k)) {
          int deg = wdeg + k;
          auto& out = resolution_basis_[deg];
          resolution_index_[{u, s}] = {deg, out.size()};
          out.push_back({u, s});
        }
  for (const auto& [deg, bucket] : resolution_basis_) {
    resolution_.set_dim(deg, bucket.size());
    std::vector<std::string> names;
    for (const auto& e : bucket)
      names.push_back(word_name(e.word) + "." + simplex_to_string(e.cell));
    resolution_.labels[deg] = std::move(names);
  }

  for (const auto& [n, bucket] : resolution_basis_) {
    auto up = resolution_basis_.find(n + 1);
    if (up == resolution_basis_.end() || up->second.empty()) continue;
    Matrix m(up->second.size(), bucket.size());
    for (std::size_t j = 0; j < bucket.size(); ++j) {
      const BarWord& u = bucket[j].word;
      const Simplex& cell = bucket[j].cell;
      const std::size_t k = u.size();
      std::vector<int> degs(k);
      for (std::size_t t = 0; t < k; ++t)
        degs[t] = CechDga::degree(letters[u[t]]);
      const std::vector<int> pre = shifted_prefixes(degs);
      auto target = [&](const BarWord& v, const Simplex& s) {
        const auto& [vd, vp] = resolution_index_.at({v, s});
        (void)vd;
        return vp;
      };
      // Differentiate one letter.
      for (std::size_t t = 0; t < k; ++t)
        for (const auto& [tgt, c] : a.d(a.gen(letters[u[t]]))) {
          auto idx = a.ideal_index(tgt);
          if (!idx) throw invariant_error("ideal differential left the ideal basis");
          BarWord v = u;
          v[t] = *idx;
          madd(f, m, target(v, cell), j, f.mul(f.neg(sign_pow(f, pre[t])), c));
        }
      // Merge adjacent letters.
      for (std::size_t t = 0; t + 1 < k; ++t) {
        auto pr = a.mul_basis(letters[u[t]], letters[u[t + 1]]);
        if (!pr) continue;
        auto idx = a.ideal_index(pr->first);
        if (!idx) throw invariant_error("letter product left the augmentation ideal");
        BarWord v;
        v.reserve(k - 1);
        v.insert(v.end(), u.begin(), u.begin() + static_cast<long>(t));
        v.push_back(*idx);
        v.insert(v.end(), u.begin() + static_cast<long>(t) + 2, u.end());
        madd(f, m, target(v, cell), j, f.mul(sign_pow(f, pre[t + 1]), pr->second));
      }
      // Push the last letter into the module factor: -(-1)^{pre[k-1]}, the
      // opposite of the sign that merges the last two letters, so the two
      // routes from [..|a|b].m to [..].(ab)m cancel.
      if (k >= 1) {
        auto pr = a.mul_basis(letters[u[k - 1]], cell);
        if (pr) {
          BarWord v(u.begin(), u.end() - 1);
          madd(f, m, target(v, pr->first), j,
               f.mul(f.neg(sign_pow(f, pre[k - 1])), pr->second));
        }
      }
      // Differentiate the module factor: (-1)^{pre[k]}.
      for (const auto& [tgt, c] : a.d(a.gen(cell)))
        madd(f, m, target(u, tgt), j, f.mul(sign_pow(f, pre[k]), c));
    }
    resolution_.set_diff(n, std::move(m));
  }
  resolution_.require_valid("truncated free resolution");
  resolution_built_ = true;
}

// ---------------------------------------------------------------------------
// DualWordAlgebra
// ---------------------------------------------------------------------------

DualWordAlgebra::DualWordAlgebra(const BarConstruction& bar)
    : bar_(&bar), complex_(bar.algebra().field()) {
  const ChainComplex& c = bar.coalgebra();
  const Field& f = bar.algebra().field();
  for (int k : c.degrees()) {
    complex_.set_dim(-k, c.dim(k));
    std::vector<std::string> names;
    for (const BarWord& u : bar.coalgebra_basis(k))
      names.push_back(bar.word_name(u) + "*");
    complex_.labels[-k] = std::move(names);
  }
  // The differential out of dual degree n = -k is -(-1)^n times the
  // transpose of the coalgebra differential into degree k; that sign is what
  // makes concatenation of dual words satisfy the Leibniz rule.
  for (int k : c.degrees()) {
    const int n = -k;
    if (c.dim(k) == 0 || c.dim(k - 1) == 0) continue;
    Matrix m = transpose(c.diff(k - 1));
    m = mat_scale(f, sign_pow(f, n + 1), m);
    complex_.set_diff(n, std::move(m));
  }
  complex_.require_valid("dual word algebra");
}

DualWordAlgebra::Element DualWordAlgebra::unit() const {
  return {{BarWord{}, bar_->algebra().field().one()}};
}

DualWordAlgebra::Element DualWordAlgebra::gen(const BarWord& u) const {
  if (!bar_->coalgebra_index(u))
    throw parse_error("word is not in the truncated basis");
  return {{u, bar_->algebra().field().one()}};
}

std::optional<std::pair<BarWord, Scalar>> DualWordAlgebra::mul_basis(
    const BarWord& x, const BarWord& y) const {
  if (static_cast<int>(x.size() + y.size()) > bar_->word_bound())
    return std::nullopt;
  BarWord xy = x;
  xy.insert(xy.end(), y.begin(), y.end());
  const Field& f = bar_->algebra().field();
  long long e = static_cast<long long>(bar_->word_degree(x)) *
                static_cast<long long>(bar_->word_degree(y));
  return std::make_pair(std::move(xy), sign_pow(f, e));
}

DualWordAlgebra::Element DualWordAlgebra::mul(const Element& x,
                                              const Element& y) const {
  const Field& f = bar_->algebra().field();
  Element out;
  for (const auto& [u, cu] : x)
    for (const auto& [v, cv] : y) {
      auto pr = mul_basis(u, v);
      if (!pr) continue;
      Scalar c = f.mul(pr->second, f.mul(cu, cv));
      auto it = out.find(pr->first);
      if (it == out.end())
        out[pr->first] = c;
      else
        it->second = f.add(it->second, c);
    }
  for (auto it = out.begin(); it != out.end();)
    it = f.is_zero(it->second) ? out.erase(it) : std::next(it);
  return out;
}

DualWordAlgebra::Element DualWordAlgebra::add(const Element& x,
                                              const Element& y) const {
  const Field& f = bar_->algebra().field();
  Element out = x;
  for (const auto& [v, cv] : y) {
    auto it = out.find(v);
    if (it == out.end())
      out[v] = cv;
    else
      it->second = f.add(it->second, cv);
  }
  for (auto it = out.begin(); it != out.end();)
    it = f.is_zero(it->second) ? out.erase(it) : std::next(it);
  return out;
}

DualWordAlgebra::Element DualWordAlgebra::scale(const Scalar& c,
                                                const Element& x) const {
  const Field& f = bar_->algebra().field();
  Element out;
  for (const auto& [u, cu] : x) {
    Scalar v = f.mul(c, cu);
    if (!f.is_zero(v)) out[u] = v;
  }
  return out;
}

DualWordAlgebra::Element DualWordAlgebra::d(const Element& x) const {
  const Field& f = bar_->algebra().field();
  Element out;
  for (const auto& [u, cu] : x) {
    const int n = -bar_->word_degree(u);
    auto pos = bar_->coalgebra_index(u);
    if (!pos) throw parse_error("word is not in the truncated basis");
    Matrix m = complex_.diff(n);
    const auto& up = bar_->coalgebra_basis(-n - 1);
    for (std::size_t i = 0; i < up.size(); ++i) {
      const Scalar& e = m.at(i, *pos);
      if (f.is_zero(e)) continue;
      Scalar c = f.mul(e, cu);
      auto it = out.find(up[i]);
      if (it == out.end())
        out[up[i]] = c;
      else
        it->second = f.add(it->second, c);
    }
  }
  for (auto it = out.begin(); it != out.end();)
    it = f.is_zero(it->second) ? out.erase(it) : std::next(it);
  return out;
}

bool DualWordAlgebra::is_zero(const Element& x) const {
  const Field& f = bar_->algebra().field();
  for (const auto& [u, c] : x)
    if (!f.is_zero(c)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// TransferredBar
// ---------------------------------------------------------------------------

struct TransferredBar::PureTensor {
  Scalar coeff;
  std::vector<int> letter_deg;                  // ideal degree per slot
  std::vector<std::vector<Scalar>> letter_vec;  // coords in ideal_cells_[deg]
  bool has_cell = false;
  int cell_deg = 0;
  std::vector<Scalar> cell_vec;
};

TransferredBar::TransferredBar(const CechDga& algebra)
    : algebra_(&algebra),
      ideal_complex_(algebra.field()),
      ideal_sdr_(ChainComplex(algebra.field()), ChainComplex(algebra.field())),
      algebra_sdr_(ChainComplex(algebra.field()), ChainComplex(algebra.field())) {
  if (!algebra.space().is_connected())
    throw parse_error("the base space is not connected");
  IdealData ideal = build_ideal(algebra);
  ideal_complex_ = std::move(ideal.complex);
  ideal_cells_ = std::move(ideal.cells);
  ideal_sdr_ = gaussian_sdr(ideal_complex_);
  algebra_sdr_ = gaussian_sdr(algebra.complex());
  const Field& f = algebra.field();
  for (int n : ideal_complex_.degrees())
    if (ideal_complex_.dim(n) > 0)
      ideal_ip_[n] = mat_mul(f, ideal_sdr_.include_at(n), ideal_sdr_.project_at(n));
  for (int n : algebra.complex().degrees())
    if (algebra.complex().dim(n) > 0)
      algebra_ip_[n] =
          mat_mul(f, algebra_sdr_.include_at(n), algebra_sdr_.project_at(n));
  for (int n : ideal_sdr_.small.degrees())
    for (std::size_t j = 0; j < ideal_sdr_.small.dim(n); ++j) {
      letter_degrees_.push_back(n);
      letter_pos_.push_back(j);
    }
  for (int n : algebra_sdr_.small.degrees())
    for (std::size_t j = 0; j < algebra_sdr_.small.dim(n); ++j) {
      cell_degrees_.push_back(n);
      cell_pos_.push_back(j);
    }
}

// All terms of delta (1 + h delta + (h delta)^2 + ...) applied to `start`,
// where delta merges adjacent letters or pushes the last letter into the
// module factor, and h is the tensor-trick homotopy assembled from the two
// Gaussian retractions.  Every delta application removes a letter, so the
// expansion terminates.
std::vector<TransferredBar::PureTensor> TransferredBar::transfer_rounds(
    const PureTensor& start, bool with_cell) const {
  const CechDga& a = *algebra_;
  const Field& f = a.field();

  auto ideal_dim = [&](int deg) -> std::size_t {
    return deg >= 0 && deg < static_cast<int>(ideal_cells_.size())
               ? ideal_cells_[static_cast<std::size_t>(deg)].size()
               : 0;
  };

  // Product of two ideal vectors, in ideal coordinates.
  auto mul_ideal = [&](int p, const std::vector<Scalar>& vp, int q,
                       const std::vector<Scalar>& vq) {
    const int deg = p + q;
    std::vector<Scalar> out(ideal_dim(deg));
    if (out.empty()) return std::make_pair(deg, out);
    const auto& cp = ideal_cells_[static_cast<std::size_t>(p)];
    const auto& cq = ideal_cells_[static_cast<std::size_t>(q)];
    const auto& cd = ideal_cells_[static_cast<std::size_t>(deg)];
    for (std::size_t i = 0; i < vp.size(); ++i) {
      if (f.is_zero(vp[i])) continue;
      for (std::size_t j = 0; j < vq.size(); ++j) {
        if (f.is_zero(vq[j])) continue;
        auto pr = a.mul_basis(cp[i], cq[j]);
        if (!pr) continue;
        std::size_t t = position_in(cd, pr->first);
        out[t] = f.add(out[t], f.mul(pr->second, f.mul(vp[i], vq[j])));
      }
    }
    return std::make_pair(deg, out);
  };

  // Product (ideal vector) . (algebra vector), in algebra coordinates.
  auto mul_into_cell = [&](int p, const std::vector<Scalar>& vp, int q,
                           const std::vector<Scalar>& vq) {
    const int deg = p + q;
    const auto& space = a.space();
    std::vector<Scalar> out(space.simplices(deg).size());
    if (out.empty()) return std::make_pair(deg, out);
    const auto& cp = ideal_cells_[static_cast<std::size_t>(p)];
    const auto& cq = space.simplices(q);
    for (std::size_t i = 0; i < vp.size(); ++i) {
      if (f.is_zero(vp[i])) continue;
      for (std::size_t j = 0; j < vq.size(); ++j) {
        if (f.is_zero(vq[j])) continue;
        auto pr = a.mul_basis(cp[i], cq[j]);
        if (!pr) continue;
        auto t = space.index_of(pr->first);
        if (!t) throw invariant_error("product left the cell basis");
        out[*t] = f.add(out[*t], f.mul(pr->second, f.mul(vp[i], vq[j])));
      }
    }
    return std::make_pair(deg, out);
  };

  auto prefixes = [&](const PureTensor& t) {
    return shifted_prefixes(t.letter_deg);
  };

  auto apply_delta = [&](const PureTensor& t) {
    std::vector<PureTensor> out;
    const std::size_t k = t.letter_deg.size();
    const std::vector<int> pre = prefixes(t);
    for (std::size_t i = 0; i + 1 < k; ++i) {
      auto [deg, vec] = mul_ideal(t.letter_deg[i], t.letter_vec[i],
                                  t.letter_deg[i + 1], t.letter_vec[i + 1]);
      if (all_zero(f, vec)) continue;
      PureTensor nt = t;
      nt.coeff = f.mul(sign_pow(f, pre[i + 1]), t.coeff);
      nt.letter_deg.erase(nt.letter_deg.begin() + static_cast<long>(i) + 1);
      nt.letter_vec.erase(nt.letter_vec.begin() + static_cast<long>(i) + 1);
      nt.letter_deg[i] = deg;
      nt.letter_vec[i] = std::move(vec);
      out.push_back(std::move(nt));
    }
    if (with_cell && k >= 1) {
      auto [deg, vec] = mul_into_cell(t.letter_deg[k - 1], t.letter_vec[k - 1],
                                      t.cell_deg, t.cell_vec);
      if (!all_zero(f, vec)) {
        PureTensor nt = t;
        nt.coeff = f.mul(f.neg(sign_pow(f, pre[k - 1])), t.coeff);
        nt.letter_deg.pop_back();
        nt.letter_vec.pop_back();
        nt.cell_deg = deg;
        nt.cell_vec = std::move(vec);
        out.push_back(std::move(nt));
      }
    }
    return out;
  };

  // Tensor-trick homotopy: on slot j it applies the (shifted) ideal homotopy
  // with sign -(-1)^{pre[j]}, after projecting every earlier slot onto its
  // harmonic part; the final term treats the module factor the same way with
  // sign (-1)^{pre[k]}.
  auto apply_h = [&](const PureTensor& t) {
    std::vector<PureTensor> out;
    const std::size_t k = t.letter_deg.size();
    const std::vector<int> pre = prefixes(t);
    std::vector<std::vector<Scalar>> ip_slots(k);
    bool dead = false;
    for (std::size_t j = 0; j < k && !dead; ++j) {
      auto it = ideal_ip_.find(t.letter_deg[j]);
      ip_slots[j] = it == ideal_ip_.end()
                        ? std::vector<Scalar>(t.letter_vec[j].size())
                        : mat_apply(f, it->second, t.letter_vec[j]);
      // A zero harmonic part kills every later homotopy term, but earlier
      // slots (which keep the raw vector there) are unaffected.
      if (all_zero(f, ip_slots[j])) dead = true;
    }
    for (std::size_t j = 0; j < k; ++j) {
      bool prefix_dead = false;
      for (std::size_t t2 = 0; t2 < j; ++t2)
        if (all_zero(f, ip_slots[t2])) prefix_dead = true;
      if (prefix_dead) break;
      std::vector<Scalar> hv =
          mat_apply(f, ideal_sdr_.homotopy_at(t.letter_deg[j]), t.letter_vec[j]);
      if (all_zero(f, hv)) continue;
      PureTensor nt = t;
      nt.coeff = f.mul(f.neg(sign_pow(f, pre[j])), t.coeff);
      for (std::size_t t2 = 0; t2 < j; ++t2) nt.letter_vec[t2] = ip_slots[t2];
      nt.letter_deg[j] = t.letter_deg[j] - 1;
      nt.letter_vec[j] = std::move(hv);
      out.push_back(std::move(nt));
    }
    if (with_cell && !dead) {
      std::vector<Scalar> hv =
          mat_apply(f, algebra_sdr_.homotopy_at(t.cell_deg), t.cell_vec);
      if (!all_zero(f, hv)) {
        PureTensor nt = t;
        nt.coeff = f.mul(sign_pow(f, pre[k]), t.coeff);
        nt.letter_vec = ip_slots;
        nt.cell_deg = t.cell_deg - 1;
        nt.cell_vec = std::move(hv);
        out.push_back(std::move(nt));
      }
    }
    return out;
  };

  std::vector<PureTensor> all;
  std::vector<PureTensor> cur = apply_delta(start);
  while (!cur.empty()) {
    all.insert(all.end(), cur.begin(), cur.end());
    std::vector<PureTensor> next;
    for (const PureTensor& t : cur)
      for (const PureTensor& ht : apply_h(t))
        for (PureTensor& dt : apply_delta(ht)) next.push_back(std::move(dt));
    cur = std::move(next);
  }
  return all;
}

ChainComplex TransferredBar::build_model(int word_bound, bool with_cell,
                                         std::size_t basis_cap) const {
  if (word_bound < 0) throw parse_error("word bound must be nonnegative");
  const Field& f = algebra_->field();

  // Enumerate words in the cohomology letters, shortest first.
  std::vector<BarWord> frontier = {BarWord{}};
  std::vector<BarWord> words = frontier;
  for (int len = 1; len <= word_bound; ++len) {
    std::vector<BarWord> next;
    for (const BarWord& u : frontier)
      for (std::size_t k = 0; k < letter_degrees_.size(); ++k) {
        BarWord v = u;
        v.push_back(k);
        next.push_back(std::move(v));
      }
    words.insert(words.end(), next.begin(), next.end());
    if (words.size() * std::max<std::size_t>(cell_degrees_.size(), 1) > basis_cap)
      throw parse_error("transferred model basis exceeds the cap");
    frontier = std::move(next);
    if (frontier.empty()) break;
  }

  auto word_deg = [&](const BarWord& u) {
    int d = 0;
    for (std::size_t k : u) d += letter_degrees_[k] - 1;
    return d;
  };
  auto letter_name = [&](std::size_t k) {
    std::ostringstream os;
    os << "h" << letter_degrees_[k] << "#" << letter_pos_[k];
    return os.str();
  };

  struct Key {
    BarWord word;
    std::size_t cell;
    bool operator<(const Key& o) const {
      return std::tie(word, cell) < std::tie(o.word, o.cell);
    }
  };
  std::map<int, std::vector<Key>> basis;
  std::map<Key, std::pair<int, std::size_t>> index;
  for (const BarWord& u : words) {
    const int wd = word_deg(u);
    if (with_cell) {
      for (std::size_t c = 0; c < cell_degrees_.size(); ++c) {
        Key key{u, c};
        auto& bucket = basis[wd + cell_degrees_[c]];
        index[key] = {wd + cell_degrees_[c], bucket.size()};
        bucket.push_back(std::move(key));
      }
    } else {
      Key key{u, 0};
      auto& bucket = basis[wd];
      index[key] = {wd, bucket.size()};
      bucket.push_back(std::move(key));
    }
  }

  ChainComplex model(f);
  for (const auto& [deg, bucket] : basis) {
    model.set_dim(deg, bucket.size());
    std::vector<std::string> names;
    for (const Key& key : bucket) {
      std::ostringstream os;
      os << "[";
      for (std::size_t t = 0; t < key.word.size(); ++t) {
        if (t) os << "|";
        os << letter_name(key.word[t]);
      }
      os << "]";
      if (with_cell) os << ".H" << cell_degrees_[key.cell] << "#" << cell_pos_[key.cell];
      names.push_back(os.str());
    }
    model.labels[deg] = std::move(names);
  }

  // Letter id lookup from (ideal degree, position in the small basis).
  auto letter_id = [&](int deg, std::size_t pos) -> std::size_t {
    for (std::size_t k = 0; k < letter_degrees_.size(); ++k)
      if (letter_degrees_[k] == deg && letter_pos_[k] == pos) return k;
    throw invariant_error("transferred letter not found");
  };
  auto cell_id = [&](int deg, std::size_t pos) -> std::size_t {
    for (std::size_t k = 0; k < cell_degrees_.size(); ++k)
      if (cell_degrees_[k] == deg && cell_pos_[k] == pos) return k;
    throw invariant_error("transferred cell not found");
  };

  // Project a pure tensor onto the small basis, accumulating into `col`.
  auto project_into = [&](const PureTensor& t, int target_deg,
                          std::map<std::size_t, Scalar>& col) {
    const std::size_t k = t.letter_deg.size();
    std::vector<std::vector<std::pair<std::size_t, Scalar>>> options(k);
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<Scalar> w =
          mat_apply(f, ideal_sdr_.project_at(t.letter_deg[j]), t.letter_vec[j]);
      for (std::size_t p = 0; p < w.size(); ++p)
        if (!f.is_zero(w[p]))
          options[j].push_back({letter_id(t.letter_deg[j], p), w[p]});
      if (options[j].empty()) return;
    }
    std::vector<std::pair<std::size_t, Scalar>> cell_options;
    if (t.has_cell) {
      std::vector<Scalar> w =
          mat_apply(f, algebra_sdr_.project_at(t.cell_deg), t.cell_vec);
      for (std::size_t p = 0; p < w.size(); ++p)
        if (!f.is_zero(w[p])) cell_options.push_back({cell_id(t.cell_deg, p), w[p]});
      if (cell_options.empty()) return;
    } else {
      cell_options.push_back({0, f.one()});
    }
    // Cartesian product over the slots.
    std::vector<std::size_t> pick(k, 0);
    while (true) {
      Scalar c = t.coeff;
      BarWord u(k);
      for (std::size_t j = 0; j < k; ++j) {
        u[j] = options[j][pick[j]].first;
        c = f.mul(c, options[j][pick[j]].second);
      }
      for (const auto& [cid, cc] : cell_options) {
        auto it = index.find(Key{u, cid});
        if (it == index.end() || it->second.first != target_deg)
          throw invariant_error("transferred differential escaped the basis");
        Scalar v = f.mul(c, cc);
        auto [pos_it, inserted] = col.try_emplace(it->second.second, v);
        if (!inserted) pos_it->second = f.add(pos_it->second, v);
      }
      std::size_t j = 0;
      for (; j < k; ++j) {
        if (++pick[j] < options[j].size()) break;
        pick[j] = 0;
      }
      if (j == k) break;
    }
  };

  for (const auto& [n, bucket] : basis) {
    auto up = basis.find(n + 1);
    if (up == basis.end() || up->second.empty()) continue;
    Matrix m(up->second.size(), bucket.size());
    for (std::size_t j = 0; j < bucket.size(); ++j) {
      const Key& key = bucket[j];
      PureTensor start;
      start.coeff = f.one();
      for (std::size_t t = 0; t < key.word.size(); ++t) {
        const std::size_t k = key.word[t];
        start.letter_deg.push_back(letter_degrees_[k]);
        start.letter_vec.push_back(
            column_of(ideal_sdr_.include_at(letter_degrees_[k]), letter_pos_[k]));
      }
      if (with_cell) {
        start.has_cell = true;
        start.cell_deg = cell_degrees_[key.cell];
        start.cell_vec =
            column_of(algebra_sdr_.include_at(start.cell_deg), cell_pos_[key.cell]);
      }
      std::map<std::size_t, Scalar> col;
      for (const PureTensor& t : transfer_rounds(start, with_cell))
        project_into(t, n + 1, col);
      for (const auto& [i, c] : col) madd(f, m, i, j, c);
    }
    model.set_diff(n, std::move(m));
  }
  model.require_valid(with_cell ? "transferred resolution model"
                                : "transferred coalgebra model");
  return model;
}

ChainComplex TransferredBar::coalgebra_model(int word_bound,
                                             std::size_t basis_cap) const {
  return build_model(word_bound, false, basis_cap);
}

ChainComplex TransferredBar::resolution_model(int word_bound,
                                              std::size_t basis_cap) const {
  return build_model(word_bound, true, basis_cap);
}

}  // namespace cotangent
