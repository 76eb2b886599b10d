#include "cotangent/cech_dga.hpp"

#include <algorithm>

namespace cotangent {

CechDga::CechDga(SimplicialComplex space, const Field& f, int base_vertex)
    : space_(std::move(space)), field_(f), base_(base_vertex), complex_(f) {
  if (base_ < 0 || base_ >= space_.n_vertices())
    throw parse_error("base vertex out of range");
  complex_ = space_.cochain_complex(field_);
  for (int k = 0; k <= space_.dim(); ++k)
    for (const Simplex& s : space_.simplices(k)) {
      if (k == 0 && s[0] == base_) continue;
      ideal_index_[s] = ideal_basis_.size();
      ideal_basis_.push_back(s);
    }
}

CechDga::Element CechDga::unit() const {
  Element e;
  for (const Simplex& v : space_.simplices(0)) e[v] = field_.one();
  return e;
}

CechDga::Element CechDga::gen(const Simplex& s) const {
  if (!space_.has(s)) throw parse_error("not a simplex: " + simplex_to_string(s));
  return {{s, field_.one()}};
}

std::optional<std::pair<Simplex, Scalar>> CechDga::mul_basis(const Simplex& a,
                                                             const Simplex& b) const {
  // b contributes the front segment, a the back; they must overlap in the
  // single vertex b.back() == a.front().
  if (b.back() != a.front()) return std::nullopt;
  // The concatenation is automatically strictly increasing.
  Simplex prod = b;
  prod.insert(prod.end(), a.begin() + 1, a.end());
  if (!space_.has(prod)) return std::nullopt;
  int sign_exp = degree(a) * degree(b);
  Scalar sign = (sign_exp % 2 == 0) ? field_.one() : field_.from_int(-1);
  return std::make_pair(std::move(prod), sign);
}

CechDga::Element CechDga::add(const Element& x, const Element& y) const {
  Element out = x;
  for (const auto& [s, c] : y) {
    auto it = out.find(s);
    if (it == out.end()) {
      if (!field_.is_zero(c)) out[s] = c;
      continue;
    }
    it->second = field_.add(it->second, c);
    if (field_.is_zero(it->second)) out.erase(it);
  }
  return out;
}

CechDga::Element CechDga::sub(const Element& x, const Element& y) const {
  return add(x, scale(field_.from_int(-1), y));
}

CechDga::Element CechDga::scale(const Scalar& c, const Element& x) const {
  Element out;
  if (field_.is_zero(c)) return out;
  for (const auto& [s, v] : x)
    if (!field_.is_zero(v)) out[s] = field_.mul(c, v);
  return out;
}

CechDga::Element CechDga::mul(const Element& x, const Element& y) const {
  Element out;
  for (const auto& [sa, ca] : x)
    for (const auto& [sb, cb] : y) {
      auto prod = mul_basis(sa, sb);
      if (!prod) continue;
      Scalar coeff = field_.mul(field_.mul(ca, cb), prod->second);
      auto it = out.find(prod->first);
      if (it == out.end())
        it = out.emplace(prod->first, field_.zero()).first;
      it->second = field_.add(it->second, coeff);
      if (field_.is_zero(it->second)) out.erase(it);
    }
  return out;
}

CechDga::Element CechDga::d(const Element& x) const {
  Element out;
  for (const auto& [s, c] : x) {
    if (field_.is_zero(c)) continue;
    // Insert each missing vertex; the sign is (-1)^{position in the result}.
    for (int v = 0; v < space_.n_vertices(); ++v) {
      auto pos_it = std::lower_bound(s.begin(), s.end(), v);
      if (pos_it != s.end() && *pos_it == v) continue;
      std::size_t pos = static_cast<std::size_t>(pos_it - s.begin());
      Simplex bigger = s;
      bigger.insert(bigger.begin() + static_cast<long>(pos), v);
      if (!space_.has(bigger)) continue;
      Scalar term = (pos % 2 == 0) ? c : field_.neg(c);
      auto it = out.find(bigger);
      if (it == out.end()) it = out.emplace(std::move(bigger), field_.zero()).first;
      it->second = field_.add(it->second, term);
      if (field_.is_zero(it->second)) out.erase(it);
    }
  }
  return out;
}

Scalar CechDga::augmentation(const Element& x) const {
  auto it = x.find(Simplex{base_});
  return it == x.end() ? field_.zero() : it->second;
}

bool CechDga::is_zero(const Element& x) const {
  for (const auto& [s, c] : x)
    if (!field_.is_zero(c)) return false;
  return true;
}

std::optional<std::size_t> CechDga::ideal_index(const Simplex& s) const {
  auto it = ideal_index_.find(s);
  if (it == ideal_index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace cotangent
