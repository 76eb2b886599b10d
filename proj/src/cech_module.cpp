#include "cotangent/cech_module.hpp"

#include <algorithm>
#include <iterator>

namespace cotangent {

CechModule::CechModule(const CechDga& algebra, GradedLocalSystem system)
    : algebra_(algebra), complex_(algebra.field()) {
  if (!(algebra_.space() == system.system.space()))
    throw parse_error("module system must live on the algebra's space");
  if (algebra_.field() != system.system.field())
    throw parse_error("module system must share the algebra's field");
  system.system.require_flat();
  system.require_degree_preserving();
  degrees_ = system.degrees;
  hom_ = HomotopyLocalSystem::strict(system);
  for (const auto& [s, op] : hom_->ops) ops_by_front_[s.front()].emplace_back(s, op);
  build();
}

CechModule::CechModule(const CechDga& algebra, LocalSystem system)
    : CechModule(algebra, GradedLocalSystem::ungraded(std::move(system))) {}

CechModule::CechModule(const CechDga& algebra, HomotopyLocalSystem system)
    : algebra_(algebra), complex_(algebra.field()) {
  if (!(algebra_.space() == system.space))
    throw parse_error("module system must live on the algebra's space");
  if (algebra_.field() != system.field)
    throw parse_error("module system must share the algebra's field");
  system.require_shapes();
  degrees_ = system.degrees;
  hom_ = std::move(system);
  for (const auto& [s, op] : hom_->ops) ops_by_front_[s.front()].emplace_back(s, op);
  build();
}

CechModule::Element CechModule::basis_element(const Simplex& s, std::size_t coord) const {
  if (!space().has(s)) throw parse_error("not a simplex: " + simplex_to_string(s));
  if (coord >= rank()) throw parse_error("stalk coordinate out of range");
  std::vector<Scalar> v(rank(), field().zero());
  v[coord] = field().one();
  return {{s, std::move(v)}};
}

CechModule::Element CechModule::add(const Element& x, const Element& y) const {
  const Field& f = field();
  Element out = x;
  for (const auto& [s, vec] : y) {
    auto it = out.find(s);
    if (it == out.end()) {
      out[s] = vec;
      continue;
    }
    for (std::size_t i = 0; i < vec.size(); ++i)
      it->second[i] = f.add(it->second[i], vec[i]);
  }
  // Drop exact-zero stalk vectors.
  for (auto it = out.begin(); it != out.end();) {
    bool zero = std::all_of(it->second.begin(), it->second.end(),
                            [&](const Scalar& c) { return f.is_zero(c); });
    it = zero ? out.erase(it) : std::next(it);
  }
  return out;
}

CechModule::Element CechModule::sub(const Element& x, const Element& y) const {
  return add(x, scale(field().from_int(-1), y));
}

CechModule::Element CechModule::scale(const Scalar& c, const Element& x) const {
  const Field& f = field();
  Element out;
  if (f.is_zero(c)) return out;
  for (const auto& [s, vec] : x) {
    std::vector<Scalar> w(vec.size());
    for (std::size_t i = 0; i < vec.size(); ++i) w[i] = f.mul(c, vec[i]);
    out[s] = std::move(w);
  }
  return out;
}

bool CechModule::is_zero(const Element& x) const {
  const Field& f = field();
  for (const auto& [s, vec] : x)
    for (const Scalar& c : vec)
      if (!f.is_zero(c)) return false;
  return true;
}

CechModule::Element CechModule::d(const Element& x) const {
  const Field& f = field();
  Element out;
  auto accumulate = [&](const Simplex& s, const std::vector<Scalar>& vec,
                        bool negate) {
    auto it = out.find(s);
    if (it == out.end())
      it = out.emplace(s, std::vector<Scalar>(rank(), f.zero())).first;
    for (std::size_t i = 0; i < vec.size(); ++i) {
      Scalar c = negate ? f.neg(vec[i]) : vec[i];
      it->second[i] = f.add(it->second[i], c);
    }
  };
  for (const auto& [s, vec] : x) {
    int stalk_vertex = s.back();
    std::size_t m = s.size();
    // Internal stalk differential with the total-complex sign (-1)^{m-1}.
    const Matrix& delta = hom_->internal_diff[static_cast<std::size_t>(stalk_vertex)];
    if (!is_zero_matrix(f, delta))
      accumulate(s, mat_apply(f, delta, vec), m % 2 == 0);
    // One-vertex extensions below the stalk vertex, plain Čech signs.
    for (int v = 0; v < stalk_vertex; ++v) {
      auto pos_it = std::lower_bound(s.begin(), s.end(), v);
      if (pos_it != s.end() && *pos_it == v) continue;
      std::size_t pos = static_cast<std::size_t>(pos_it - s.begin());
      Simplex bigger = s;
      bigger.insert(bigger.begin() + static_cast<long>(pos), v);
      if (!space().has(bigger)) continue;
      accumulate(bigger, vec, pos % 2 != 0);
    }
    // System operators moving the stalk upward: a chain of e added vertices
    // carries the sign (-1)^{m + e(e-1)/2}.
    auto ops = ops_by_front_.find(stalk_vertex);
    if (ops != ops_by_front_.end()) {
      for (const auto& [sigma, op] : ops->second) {
        Simplex bigger = s;
        bigger.insert(bigger.end(), sigma.begin() + 1, sigma.end());
        if (!space().has(bigger)) continue;
        std::size_t e = sigma.size() - 1;
        bool negate = (m + e * (e - 1) / 2) % 2 != 0;
        accumulate(bigger, mat_apply(f, op, vec), negate);
      }
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    bool zero = std::all_of(it->second.begin(), it->second.end(),
                            [&](const Scalar& c) { return f.is_zero(c); });
    it = zero ? out.erase(it) : std::next(it);
  }
  return out;
}

CechModule::Element CechModule::act(const Element& m, const CechDga::Element& c) const {
  const Field& f = field();
  Element out;
  for (const auto& [im, x] : m) {
    for (const auto& [ic, coef] : c) {
      if (f.is_zero(coef)) continue;
      // The algebra extends the simplex at the front.
      if (ic.back() != im.front()) continue;
      Simplex joined = ic;
      joined.insert(joined.end(), im.begin() + 1, im.end());
      if (!space().has(joined)) continue;
      int cdeg = CechDga::degree(ic);
      for (std::size_t alpha = 0; alpha < x.size(); ++alpha) {
        if (f.is_zero(x[alpha])) continue;
        int mdeg = total_degree(im, alpha);
        Scalar term = f.mul(coef, x[alpha]);
        if ((mdeg * cdeg) % 2 != 0) term = f.neg(term);
        auto it = out.find(joined);
        if (it == out.end())
          it = out.emplace(joined, std::vector<Scalar>(rank(), f.zero())).first;
        it->second[alpha] = f.add(it->second[alpha], term);
      }
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    bool zero = std::all_of(it->second.begin(), it->second.end(),
                            [&](const Scalar& s) { return f.is_zero(s); });
    it = zero ? out.erase(it) : std::next(it);
  }
  return out;
}

const std::vector<CechModule::BasisVector>& CechModule::basis(int n) const {
  static const std::vector<BasisVector> empty;
  auto it = basis_.find(n);
  return it == basis_.end() ? empty : it->second;
}

std::vector<Scalar> CechModule::coordinates(const Element& x, int n) const {
  std::vector<Scalar> v(basis(n).size(), field().zero());
  for (const auto& [s, vec] : x)
    for (std::size_t alpha = 0; alpha < vec.size(); ++alpha) {
      if (field().is_zero(vec[alpha])) continue;
      if (total_degree(s, alpha) != n) continue;
      v[index_.at({s, alpha})] = vec[alpha];
    }
  return v;
}

CechModule::Element CechModule::element_from(int n, const std::vector<Scalar>& v) const {
  const auto& b = basis(n);
  if (v.size() != b.size()) throw invariant_error("coordinate length mismatch");
  Element out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (field().is_zero(v[i])) continue;
    auto it = out.find(b[i].simplex);
    if (it == out.end())
      it = out.emplace(b[i].simplex, std::vector<Scalar>(rank(), field().zero())).first;
    it->second[b[i].coord] = v[i];
  }
  return out;
}

Matrix CechModule::action_matrix(const Simplex& g, int n) const {
  int out_deg = n + CechDga::degree(g);
  Matrix m(basis(out_deg).size(), basis(n).size());
  const auto& b = basis(n);
  for (std::size_t j = 0; j < b.size(); ++j) {
    Element img = act(basis_element(b[j].simplex, b[j].coord), algebra_.gen(g));
    std::vector<Scalar> col = coordinates(img, out_deg);
    for (std::size_t i = 0; i < col.size(); ++i) m.at(i, j) = col[i];
  }
  return m;
}

void CechModule::build() {
  for (int k = 0; k <= space().dim(); ++k)
    for (const Simplex& s : space().simplices(k))
      for (std::size_t alpha = 0; alpha < rank(); ++alpha) {
        int n = total_degree(s, alpha);
        index_[{s, alpha}] = basis_[n].size();
        basis_[n].push_back(BasisVector{s, alpha});
      }
  for (const auto& [n, b] : basis_) {
    complex_.set_dim(n, b.size());
    std::vector<std::string> lab;
    lab.reserve(b.size());
    for (const auto& bv : b)
      lab.push_back(simplex_to_string(bv.simplex) + "#" + std::to_string(bv.coord));
    complex_.labels[n] = std::move(lab);
  }
  for (const auto& [n, b] : basis_) {
    if (basis(n + 1).empty()) continue;
    Matrix dn(basis(n + 1).size(), b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
      Element img = d(basis_element(b[j].simplex, b[j].coord));
      std::vector<Scalar> col = coordinates(img, n + 1);
      for (std::size_t i = 0; i < col.size(); ++i) dn.at(i, j) = col[i];
    }
    complex_.set_diff(n, std::move(dn));
  }
  try {
    complex_.require_valid("module complex");
  } catch (const invariant_error&) {
    // Locate a violated correction identity: a nonzero entry of d^2 from
    // the piece at I to the piece at J names the operator simplex
    // {max I} + (J \ I).
    const Field& f = field();
    for (const auto& [n, b] : basis_) {
      if (basis(n + 2).empty()) continue;
      Matrix sq = mat_mul(f, complex_.diff(n + 1), complex_.diff(n));
      for (std::size_t i = 0; i < sq.rows(); ++i)
        for (std::size_t j = 0; j < sq.cols(); ++j) {
          if (f.is_zero(sq.at(i, j))) continue;
          const Simplex& src = b[j].simplex;
          const Simplex& dst = basis_.at(n + 2)[i].simplex;
          Simplex added;
          std::set_difference(dst.begin(), dst.end(), src.begin(), src.end(),
                              std::back_inserter(added));
          bool contains = added.size() == dst.size() - src.size();
          if (contains && !added.empty() && added.front() > src.back()) {
            Simplex sigma = {src.back()};
            sigma.insert(sigma.end(), added.begin(), added.end());
            throw invariant_error("homotopy system identity fails on simplex " +
                                  simplex_to_string(sigma));
          }
          throw invariant_error("module differential fails to square to zero from " +
                                simplex_to_string(src) + " to " +
                                simplex_to_string(dst));
        }
    }
    throw;
  }
}

// ---------------------------------------------------------------------------

HomComplex::HomComplex(CechModule src, CechModule dst)
    : src_(std::move(src)), dst_(std::move(dst)), complex_(src_.field()) {
  if (!(src_.space() == dst_.space()))
    throw parse_error("hom complex needs modules over one space");
  if (src_.field() != dst_.field())
    throw parse_error("hom complex needs modules over one field");
  build();
}

const std::vector<HomComplex::BasisVector>& HomComplex::basis(int k) const {
  static const std::vector<BasisVector> empty;
  auto it = basis_.find(k);
  return it == basis_.end() ? empty : it->second;
}

HomElement HomComplex::basis_hom(int k, std::size_t idx) const {
  const auto& b = basis(k);
  if (idx >= b.size()) throw invariant_error("hom basis index out of range");
  HomElement out{k, {}};
  out.images[{b[idx].vertex, b[idx].src_coord}] =
      dst_.basis_element(b[idx].target, b[idx].dst_coord);
  return out;
}

HomElement HomComplex::identity() const {
  if (src_.rank() != dst_.rank())
    throw invariant_error("identity needs equal ranks");
  HomElement out{0, {}};
  for (int v = 0; v < src_.space().n_vertices(); ++v)
    for (std::size_t alpha = 0; alpha < src_.rank(); ++alpha)
      out.images[{v, alpha}] = dst_.basis_element({v}, alpha);
  return out;
}

HomElement HomComplex::add(const HomElement& a, const HomElement& b) const {
  if (a.degree != b.degree) throw invariant_error("hom degree mismatch in add");
  HomElement out{a.degree, a.images};
  for (const auto& [key, val] : b.images) {
    auto it = out.images.find(key);
    if (it == out.images.end()) {
      out.images[key] = val;
      continue;
    }
    it->second = dst_.add(it->second, val);
    if (dst_.is_zero(it->second)) out.images.erase(it);
  }
  return out;
}

HomElement HomComplex::scale(const Scalar& c, const HomElement& a) const {
  HomElement out{a.degree, {}};
  if (field().is_zero(c)) return out;
  for (const auto& [key, val] : a.images) out.images[key] = dst_.scale(c, val);
  return out;
}

bool HomComplex::is_zero(const HomElement& a) const {
  for (const auto& [key, val] : a.images)
    if (!dst_.is_zero(val)) return false;
  return true;
}

CechModule::Element HomComplex::apply(const HomElement& phi,
                                      const CechModule::Element& m) const {
  const Field& f = field();
  CechModule::Element out;
  for (const auto& [s, vec] : m) {
    int v = s.back();
    for (std::size_t alpha = 0; alpha < vec.size(); ++alpha) {
      if (f.is_zero(vec[alpha])) continue;
      auto it = phi.images.find({v, alpha});
      if (it == phi.images.end()) continue;
      // Writing the basis vector through the free generator at v picks up
      // the action's sign: e = sigma * (m_v alpha) . g_s with
      // sigma = (-1)^{internal degree of alpha * simplex dimension}.
      int sig_exp = src_.degrees()[alpha] * CechDga::degree(s);
      Scalar coef = (sig_exp % 2 == 0) ? vec[alpha] : f.neg(vec[alpha]);
      CechModule::Element term = dst_.act(it->second, src_.algebra().gen(s));
      out = dst_.add(out, dst_.scale(coef, term));
    }
  }
  return out;
}

HomElement HomComplex::differential(const HomElement& phi) const {
  const Field& f = field();
  HomElement out{phi.degree + 1, {}};
  Scalar sign = (phi.degree % 2 == 0) ? f.one() : f.from_int(-1);
  for (int v = 0; v < src_.space().n_vertices(); ++v)
    for (std::size_t alpha = 0; alpha < src_.rank(); ++alpha) {
      CechModule::Element val;
      auto it = phi.images.find({v, alpha});
      if (it != phi.images.end()) val = dst_.d(it->second);
      CechModule::Element corr = apply(phi, src_.d(src_.basis_element({v}, alpha)));
      val = dst_.sub(val, dst_.scale(sign, corr));
      if (!dst_.is_zero(val)) out.images[{v, alpha}] = std::move(val);
    }
  return out;
}

HomElement HomComplex::compose(const HomElement& fmap, const HomElement& gmap) const {
  HomElement out{fmap.degree + gmap.degree, {}};
  for (const auto& [key, val] : gmap.images) {
    CechModule::Element img = apply(fmap, val);
    if (!dst_.is_zero(img)) out.images[key] = std::move(img);
  }
  return out;
}

std::vector<Scalar> HomComplex::to_vector(const HomElement& phi) const {
  const Field& f = field();
  std::vector<Scalar> v(basis(phi.degree).size(), f.zero());
  for (const auto& [key, val] : phi.images) {
    for (const auto& [s, vec] : val)
      for (std::size_t beta = 0; beta < vec.size(); ++beta) {
        if (f.is_zero(vec[beta])) continue;
        if (s.front() != key.first)
          throw invariant_error("module map image escapes its generator corner");
        auto it = index_.find({key.first, key.second, s, beta});
        if (it == index_.end())
          throw invariant_error("module map image has an off-degree component");
        v[it->second] = vec[beta];
      }
  }
  return v;
}

HomElement HomComplex::from_vector(int degree, const std::vector<Scalar>& v) const {
  const auto& b = basis(degree);
  if (v.size() != b.size()) throw invariant_error("hom coordinate length mismatch");
  HomElement out{degree, {}};
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (field().is_zero(v[i])) continue;
    HomElement term = basis_hom(degree, i);
    out = add(out, scale(v[i], term));
  }
  return out;
}

std::map<int, std::vector<int>> HomComplex::cech_filtration() const {
  std::map<int, std::vector<int>> out;
  for (const auto& [k, b] : basis_) {
    std::vector<int>& levels = out[k];
    levels.reserve(b.size());
    for (const auto& bv : b) levels.push_back(CechDga::degree(bv.target));
  }
  return out;
}

CechModule::Element apply_module_map(const CechModule& m, const HomElement& phi,
                                     const CechModule::Element& x) {
  const Field& f = m.field();
  CechModule::Element out;
  for (const auto& [s, vec] : x) {
    int v = s.back();
    for (std::size_t alpha = 0; alpha < vec.size(); ++alpha) {
      if (f.is_zero(vec[alpha])) continue;
      auto it = phi.images.find({v, alpha});
      if (it == phi.images.end()) continue;
      // Same rewriting through the free generators as HomComplex::apply.
      int sig_exp = m.degrees()[alpha] * CechDga::degree(s);
      Scalar coef = (sig_exp % 2 == 0) ? vec[alpha] : f.neg(vec[alpha]);
      CechModule::Element term = m.act(it->second, m.algebra().gen(s));
      out = m.add(out, m.scale(coef, term));
    }
  }
  return out;
}

Matrix module_map_matrix(const CechModule& m, const HomElement& phi, int n) {
  int out_deg = n + phi.degree;
  Matrix mat(m.basis(out_deg).size(), m.basis(n).size());
  const auto& b = m.basis(n);
  for (std::size_t j = 0; j < b.size(); ++j) {
    CechModule::Element img =
        apply_module_map(m, phi, m.basis_element(b[j].simplex, b[j].coord));
    std::vector<Scalar> col = m.coordinates(img, out_deg);
    for (std::size_t i = 0; i < col.size(); ++i) mat.at(i, j) = col[i];
  }
  return mat;
}

ContractionOutcome contracting_homotopy(const CechModule& m) {
  for (int v = 0; v < m.space().n_vertices(); ++v)
    if (!m.stalk_complex(v).cohomology().empty())
      return {std::nullopt,
              "stalk at " + simplex_to_string({v}) + " is not acyclic"};
  // With acyclic stalks the identity map is a boundary in the endomorphism
  // complex; the preimage under D at degree -1 is the contraction, since
  // D(h) = d h + h d for odd-degree h.
  HomComplex end(m, m);
  std::vector<Scalar> id_vec = end.to_vector(end.identity());
  auto u = solve(m.field(), end.complex().diff(-1), id_vec);
  if (!u)
    throw invariant_error(
        "stalks are acyclic but no contracting homotopy was found");
  return {end.from_vector(-1, *u), ""};
}

void HomComplex::build() {
  for (int v = 0; v < src_.space().n_vertices(); ++v)
    for (std::size_t alpha = 0; alpha < src_.rank(); ++alpha)
      for (int kk = 0; kk <= src_.space().dim(); ++kk)
        for (const Simplex& target : src_.space().simplices(kk)) {
          if (target.front() != v) continue;
          for (std::size_t beta = 0; beta < dst_.rank(); ++beta) {
            int k = dst_.total_degree(target, beta) -
                    src_.degrees()[alpha];
            index_[{v, alpha, target, beta}] = basis_[k].size();
            basis_[k].push_back(BasisVector{v, alpha, target, beta});
          }
        }
  for (const auto& [k, b] : basis_) {
    complex_.set_dim(k, b.size());
    std::vector<std::string> lab;
    lab.reserve(b.size());
    for (const auto& bv : b)
      lab.push_back("{" + std::to_string(bv.vertex) + "}#" +
                    std::to_string(bv.src_coord) + "->" +
                    simplex_to_string(bv.target) + "#" + std::to_string(bv.dst_coord));
    complex_.labels[k] = std::move(lab);
  }
  for (const auto& [k, b] : basis_) {
    if (basis(k + 1).empty()) continue;
    Matrix dk(basis(k + 1).size(), b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
      HomElement img = differential(basis_hom(k, j));
      std::vector<Scalar> col = to_vector(img);
      for (std::size_t i = 0; i < col.size(); ++i) dk.at(i, j) = col[i];
    }
    complex_.set_diff(k, std::move(dk));
  }
  complex_.require_valid("hom complex");
}

}  // namespace cotangent
