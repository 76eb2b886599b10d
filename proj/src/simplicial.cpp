#include "cotangent/simplicial.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace cotangent {

Simplex normalize_simplex(Simplex s) {
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw parse_error("simplex has a repeated vertex: " + simplex_to_string(s));
  return s;
}

std::string simplex_to_string(const Simplex& s) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << ",";
    os << s[i];
  }
  os << "}";
  return os.str();
}

SimplicialComplex SimplicialComplex::from_facets(int n_vertices,
                                                 const std::vector<Simplex>& facets) {
  if (n_vertices <= 0) throw parse_error("complex needs at least one vertex");
  SimplicialComplex c;
  c.n_vertices_ = n_vertices;
  std::set<Simplex> all;
  for (int v = 0; v < n_vertices; ++v) all.insert({v});
  for (const Simplex& raw : facets) {
    Simplex f = normalize_simplex(raw);
    if (f.empty()) throw parse_error("empty facet");
    if (f.front() < 0 || f.back() >= n_vertices)
      throw parse_error("facet vertex out of range: " + simplex_to_string(f));
    // Closure: every nonempty subset is a simplex.
    std::size_t n = f.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      Simplex sub;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (std::size_t{1} << i)) sub.push_back(f[i]);
      all.insert(std::move(sub));
    }
  }
  for (const Simplex& s : all) {
    std::size_t k = s.size() - 1;
    if (c.by_dim_.size() <= k) c.by_dim_.resize(k + 1);
    c.by_dim_[k].push_back(s);
  }
  for (auto& level : c.by_dim_) std::sort(level.begin(), level.end());
  for (const auto& level : c.by_dim_)
    for (std::size_t i = 0; i < level.size(); ++i) c.index_[level[i]] = i;
  return c;
}

const std::vector<Simplex>& SimplicialComplex::simplices(int k) const {
  static const std::vector<Simplex> empty;
  if (k < 0 || k >= static_cast<int>(by_dim_.size())) return empty;
  return by_dim_[k];
}

std::size_t SimplicialComplex::total_simplices() const {
  std::size_t t = 0;
  for (const auto& level : by_dim_) t += level.size();
  return t;
}

bool SimplicialComplex::has(const Simplex& s) const { return index_.count(s) > 0; }

std::optional<std::size_t> SimplicialComplex::index_of(const Simplex& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

long long SimplicialComplex::euler_characteristic() const {
  long long chi = 0;
  for (int k = 0; k <= dim(); ++k)
    chi += (k % 2 == 0) ? static_cast<long long>(count(k))
                        : -static_cast<long long>(count(k));
  return chi;
}

bool SimplicialComplex::is_connected() const {
  if (n_vertices_ == 0) return false;
  std::vector<int> comp(n_vertices_, -1);
  std::vector<int> stack = {0};
  comp[0] = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const Simplex& e : simplices(1)) {
      int other = -1;
      if (e[0] == v) other = e[1];
      if (e[1] == v) other = e[0];
      if (other >= 0 && comp[other] < 0) {
        comp[other] = 0;
        stack.push_back(other);
      }
    }
  }
  return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

ChainComplex SimplicialComplex::cochain_complex(const Field& f) const {
  ChainComplex c(f);
  for (int k = 0; k <= dim(); ++k) {
    c.set_dim(k, count(k));
    std::vector<std::string> lab;
    lab.reserve(count(k));
    for (const Simplex& s : simplices(k)) lab.push_back(simplex_to_string(s));
    c.labels[k] = std::move(lab);
  }
  for (int k = 0; k + 1 <= dim(); ++k) {
    Matrix d(count(k + 1), count(k));
    const auto& rows = simplices(k + 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Simplex& s = rows[r];
      for (std::size_t j = 0; j < s.size(); ++j) {
        Simplex face = s;
        face.erase(face.begin() + static_cast<long>(j));
        std::size_t col = *index_of(face);
        d.at(r, col) = (j % 2 == 0) ? f.one() : f.from_int(-1);
      }
    }
    c.set_diff(k, std::move(d));
  }
  c.require_valid("simplicial cochain complex");
  return c;
}

namespace {

std::vector<Simplex> sphere2_facets() {
  std::vector<Simplex> f;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (int c = b + 1; c < 4; ++c) f.push_back({a, b, c});
  return f;
}

std::vector<Simplex> torus7_facets() {
  // The 7-vertex triangulated torus: triangles {i, i+1, i+3} and
  // {i, i+2, i+3} with indices mod 7.
  std::vector<Simplex> f;
  for (int i = 0; i < 7; ++i) {
    f.push_back(normalize_simplex({i, (i + 1) % 7, (i + 3) % 7}));
    f.push_back(normalize_simplex({i, (i + 2) % 7, (i + 3) % 7}));
  }
  return f;
}

std::vector<Simplex> rp2_6_facets() {
  // The 6-vertex projective plane (icosahedron modulo the antipodal map).
  return {{0, 1, 2}, {0, 1, 3}, {0, 2, 4}, {0, 3, 5}, {0, 4, 5},
          {1, 2, 5}, {1, 3, 4}, {1, 4, 5}, {2, 3, 4}, {2, 3, 5}};
}

std::vector<Simplex> klein_facets() {
  // A 9-vertex Klein bottle: a 3x3 grid of squares, each split into two
  // triangles; columns wrap around directly, rows wrap with a reflection.
  std::vector<Simplex> f;
  auto vertex = [](int x, int y) {
    if (y == 3) return ((3 - x % 3) % 3);  // reflected wrap of the top row
    return 3 * y + (x % 3);
  };
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) {
      f.push_back(normalize_simplex({vertex(x, y), vertex(x + 1, y), vertex(x + 1, y + 1)}));
      f.push_back(normalize_simplex({vertex(x, y), vertex(x + 1, y + 1), vertex(x, y + 1)}));
    }
  return f;
}

}  // namespace

SimplicialComplex corpus_complex(const std::string& name) {
  if (name == "point") return SimplicialComplex::from_facets(1, {});
  if (name == "interval") return SimplicialComplex::from_facets(2, {{0, 1}});
  if (name == "circle3")
    return SimplicialComplex::from_facets(3, {{0, 1}, {0, 2}, {1, 2}});
  if (name == "sphere2") return SimplicialComplex::from_facets(4, sphere2_facets());
  if (name == "torus7") return SimplicialComplex::from_facets(7, torus7_facets());
  if (name == "rp2_6") return SimplicialComplex::from_facets(6, rp2_6_facets());
  if (name == "klein") return SimplicialComplex::from_facets(9, klein_facets());
  throw parse_error("unknown built-in space: " + name);
}

std::vector<std::string> corpus_names() {
  return {"point", "interval", "circle3", "sphere2", "torus7", "rp2_6", "klein"};
}

}  // namespace cotangent
