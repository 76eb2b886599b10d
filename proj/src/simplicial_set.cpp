#include "cotangent/simplicial_set.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

namespace cotangent {

namespace {

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

ReducedSimplicialSet ReducedSimplicialSet::from_cells(std::vector<Cell> cells) {
  ReducedSimplicialSet s;
  s.cells_ = std::move(cells);

  int max_dim = 0;
  for (const Cell& c : s.cells_) {
    if (c.name.empty()) throw parse_error("simplicial set: unnamed cell");
    if (c.dim < 0) throw parse_error("simplicial set: negative dimension");
    max_dim = std::max(max_dim, c.dim);
    if (!s.by_name_.emplace(c.name, s.by_name_.size()).second)
      throw parse_error("simplicial set: duplicate cell id '" + c.name + "'");
  }
  s.by_dim_.assign(max_dim + 1, {});
  for (std::size_t k = 0; k < s.cells_.size(); ++k)
    s.by_dim_[s.cells_[k].dim].push_back(k);

  if (s.by_dim_[0].size() != 1)
    throw parse_error("simplicial set: need exactly one vertex, got " +
                      std::to_string(s.by_dim_[0].size()));
  s.vertex_ = s.by_dim_[0][0];
  if (!s.cells_[s.vertex_].faces.empty())
    throw parse_error("simplicial set: the vertex cannot have faces");

  // Face lists: right count, valid targets, canonical degeneracy words of
  // the right formal dimension.
  for (const Cell& c : s.cells_) {
    if (c.dim == 0) continue;
    if (static_cast<int>(c.faces.size()) != c.dim + 1)
      throw parse_error("simplicial set: cell '" + c.name + "' needs " +
                        std::to_string(c.dim + 1) + " faces, has " +
                        std::to_string(c.faces.size()));
    for (const FormalCell& fc : c.faces) {
      if (fc.cell >= s.cells_.size())
        throw parse_error("simplicial set: face of '" + c.name +
                          "' points at a missing cell");
      for (std::size_t t = 0; t + 1 < fc.degens.size(); ++t)
        if (fc.degens[t] <= fc.degens[t + 1])
          throw parse_error("simplicial set: face of '" + c.name +
                            "' has a non-canonical degeneracy word");
      const int base = s.cells_[fc.cell].dim;
      for (std::size_t t = 0; t < fc.degens.size(); ++t) {
        // Entry t acts on a cell of dimension base + (size - 1 - t).
        const int acting_dim = base + static_cast<int>(fc.degens.size() - 1 - t);
        if (fc.degens[t] < 0 || fc.degens[t] > acting_dim)
          throw parse_error("simplicial set: face of '" + c.name +
                            "' has an out-of-range degeneracy");
      }
      if (s.formal_dim(fc) != c.dim - 1)
        throw parse_error("simplicial set: face of '" + c.name +
                          "' has formal dimension " +
                          std::to_string(s.formal_dim(fc)) + ", expected " +
                          std::to_string(c.dim - 1));
    }
  }

  // Simplicial identities d_i d_j = d_{j-1} d_i for i < j.
  for (std::size_t k = 0; k < s.cells_.size(); ++k) {
    const Cell& c = s.cells_[k];
    if (c.dim < 2) continue;
    FormalCell z{{}, k};
    for (int j = 1; j <= c.dim; ++j)
      for (int i = 0; i < j; ++i)
        if (s.face(i, s.face(j, z)) != s.face(j - 1, s.face(i, z)))
          throw parse_error("simplicial set: cell '" + c.name +
                            "' violates d_" + std::to_string(i) + " d_" +
                            std::to_string(j) + " = d_" +
                            std::to_string(j - 1) + " d_" + std::to_string(i));
  }
  return s;
}

int ReducedSimplicialSet::dim() const {
  return static_cast<int>(by_dim_.size()) - 1;
}

const std::vector<std::size_t>& ReducedSimplicialSet::cells_of_dim(
    int n) const {
  static const std::vector<std::size_t> empty;
  if (n < 0 || n >= static_cast<int>(by_dim_.size())) return empty;
  return by_dim_[n];
}

int ReducedSimplicialSet::formal_dim(const FormalCell& c) const {
  return cells_.at(c.cell).dim + static_cast<int>(c.degens.size());
}

std::string ReducedSimplicialSet::formal_name(const FormalCell& c) const {
  std::string out;
  for (int j : c.degens) out += "s" + std::to_string(j) + ".";
  return out + cells_.at(c.cell).name;
}

FormalCell ReducedSimplicialSet::face(int i, const FormalCell& c) const {
  const int n = formal_dim(c);
  if (i < 0 || i > n || n == 0)
    throw invariant_error("simplicial set: face index out of range");
  if (c.degens.empty()) return cells_.at(c.cell).faces.at(i);
  const int j = c.degens.front();
  FormalCell inner{std::vector<int>(c.degens.begin() + 1, c.degens.end()),
                   c.cell};
  if (i == j || i == j + 1) return inner;
  if (i < j) return degeneracy(j - 1, face(i, inner));
  return degeneracy(j, face(i - 1, inner));
}

FormalCell ReducedSimplicialSet::degeneracy(int j, const FormalCell& c) const {
  if (j < 0 || j > formal_dim(c))
    throw invariant_error("simplicial set: degeneracy index out of range");
  // Insert s_j from the outside, rewriting s_j s_k = s_{k+1} s_j (j <= k)
  // until the word is strictly decreasing again.
  FormalCell out{{}, c.cell};
  out.degens.reserve(c.degens.size() + 1);
  std::size_t t = 0;
  int cur = j;
  while (t < c.degens.size() && cur <= c.degens[t]) {
    out.degens.push_back(c.degens[t] + 1);
    ++t;
  }
  out.degens.push_back(cur);
  for (; t < c.degens.size(); ++t) out.degens.push_back(c.degens[t]);
  return out;
}

FormalCell ReducedSimplicialSet::front_face(int p, const FormalCell& c) const {
  FormalCell out = c;
  while (formal_dim(out) > p) out = face(formal_dim(out), out);
  return out;
}

FormalCell ReducedSimplicialSet::back_face(int q, const FormalCell& c) const {
  FormalCell out = c;
  while (formal_dim(out) > q) out = face(0, out);
  return out;
}

ChainComplex ReducedSimplicialSet::normalized_chains(const Field& f) const {
  ChainComplex out(f);
  std::map<std::size_t, std::size_t> pos;
  for (int n = 0; n <= dim(); ++n) {
    const auto& idx = cells_of_dim(n);
    out.set_dim(-n, idx.size());
    std::vector<std::string> names;
    for (std::size_t t = 0; t < idx.size(); ++t) {
      pos[idx[t]] = t;
      names.push_back(cells_[idx[t]].name);
    }
    if (!idx.empty()) out.labels[-n] = names;
  }
  for (int n = 1; n <= dim(); ++n) {
    const auto& src = cells_of_dim(n);
    const auto& dst = cells_of_dim(n - 1);
    if (src.empty() || dst.empty()) continue;
    Matrix m(dst.size(), src.size());
    for (std::size_t j = 0; j < src.size(); ++j) {
      FormalCell z{{}, src[j]};
      for (int i = 0; i <= n; ++i) {
        FormalCell fc = face(i, z);
        if (!fc.nondegenerate()) continue;
        Scalar sgn = (i % 2 == 0) ? f.one() : f.from_int(-1);
        m.at(pos.at(fc.cell), j) = f.add(m.at(pos.at(fc.cell), j), sgn);
      }
    }
    out.set_diff(-n, std::move(m));
  }
  out.require_valid("normalized chains");
  return out;
}

bool ReducedSimplicialSet::operator==(const ReducedSimplicialSet& o) const {
  if (cells_.size() != o.cells_.size()) return false;
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    if (cells_[k].name != o.cells_[k].name || cells_[k].dim != o.cells_[k].dim ||
        cells_[k].faces != o.cells_[k].faces)
      return false;
  }
  return true;
}

ReducedSimplicialSet sset_product(const ReducedSimplicialSet& x,
                                  const ReducedSimplicialSet& y) {
  using Pair = std::pair<FormalCell, FormalCell>;
  std::vector<Pair> pairs;
  std::map<Pair, std::size_t> index;
  std::vector<std::string> names;

  // Nondegenerate cells of the product: (s_B a, s_A b) with disjoint
  // degeneracy sets.  Words are the sets in decreasing order.
  for (std::size_t xi = 0; xi < x.cell_count(); ++xi)
    for (std::size_t yi = 0; yi < y.cell_count(); ++yi) {
      const int p = x.cell(xi).dim, q = y.cell(yi).dim;
      for (int n = std::max(p, q); n <= p + q; ++n) {
        const int kb = n - p, ka = n - q;
        std::vector<int> all(n);
        for (int t = 0; t < n; ++t) all[t] = t;
        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + kb, true);
        // Enumerate B (|B| = kb), then A inside the complement (|A| = ka).
        std::vector<std::vector<int>> bs;
        do {
          std::vector<int> b;
          for (int t = 0; t < n; ++t)
            if (pick[t]) b.push_back(t);
          bs.push_back(std::move(b));
        } while (std::prev_permutation(pick.begin(), pick.end()));
        for (const std::vector<int>& b : bs) {
          std::vector<int> rest;
          for (int t = 0; t < n; ++t)
            if (!std::binary_search(b.begin(), b.end(), t)) rest.push_back(t);
          if (static_cast<int>(rest.size()) < ka) continue;
          std::vector<bool> pa(rest.size(), false);
          std::fill(pa.begin(), pa.begin() + ka, true);
          do {
            std::vector<int> a;
            for (std::size_t t = 0; t < rest.size(); ++t)
              if (pa[t]) a.push_back(rest[t]);
            FormalCell u{{}, xi}, v{{}, yi};
            for (int t : b) u = x.degeneracy(t, u);
            for (int t : a) v = y.degeneracy(t, v);
            Pair key{u, v};
            if (!index.count(key)) {
              index[key] = pairs.size();
              pairs.push_back(key);
              std::string nm = x.cell(xi).name + "*" + y.cell(yi).name;
              if (!b.empty() || !a.empty())
                nm += "(" + join_ints(b) + "|" + join_ints(a) + ")";
              names.push_back(nm);
            }
          } while (std::prev_permutation(pa.begin(), pa.end()));
        }
      }
    }

  // Canonical form of a componentwise face: peel common degeneracy
  // directions from the outside, then express the result as a degeneracy
  // word on a nondegenerate pair.
  auto normalize = [&](FormalCell u, FormalCell v) {
    std::vector<int> peeled;  // outermost first
    for (;;) {
      const int m = x.formal_dim(u);
      bool found = false;
      for (int j = m - 1; j >= 0; --j) {
        FormalCell u1 = x.face(j + 1, u), v1 = y.face(j + 1, v);
        if (x.degeneracy(j, u1) == u && y.degeneracy(j, v1) == v) {
          peeled.push_back(j);
          u = std::move(u1);
          v = std::move(v1);
          found = true;
          break;
        }
      }
      if (!found) break;
    }
    auto it = index.find({u, v});
    if (it == index.end())
      throw invariant_error("product: face landed outside the enumeration");
    // Rebuild innermost peel first; the canonical insert of s_j rewrites
    // s_j s_k = s_{k+1} s_j while j <= k, exactly as in `degeneracy`.
    FormalCell fc{{}, it->second};
    for (std::size_t t = peeled.size(); t-- > 0;) {
      std::vector<int> word;
      word.reserve(fc.degens.size() + 1);
      std::size_t w = 0;
      while (w < fc.degens.size() && peeled[t] <= fc.degens[w]) {
        word.push_back(fc.degens[w] + 1);
        ++w;
      }
      word.push_back(peeled[t]);
      for (; w < fc.degens.size(); ++w) word.push_back(fc.degens[w]);
      fc.degens = std::move(word);
    }
    return fc;
  };

  std::vector<ReducedSimplicialSet::Cell> cells(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [u, v] = pairs[k];
    ReducedSimplicialSet::Cell c;
    c.name = names[k];
    c.dim = x.formal_dim(u);
    if (c.dim > 0)
      for (int i = 0; i <= c.dim; ++i)
        c.faces.push_back(normalize(x.face(i, u), y.face(i, v)));
    cells[k] = std::move(c);
  }
  return ReducedSimplicialSet::from_cells(std::move(cells));
}

ReducedSimplicialSet sset_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("simplicial set JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("cells") || !j["cells"].is_array())
    throw parse_error("simplicial set JSON: expected {\"cells\": [...]}");

  auto id_of = [](const nlohmann::json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw parse_error("simplicial set JSON: cell id must be string or int");
  };

  std::map<std::string, std::size_t> ids;
  for (const auto& c : j["cells"]) {
    if (!c.contains("id")) throw parse_error("simplicial set JSON: missing id");
    ids.emplace(id_of(c["id"]), ids.size());
  }

  std::vector<ReducedSimplicialSet::Cell> cells;
  for (const auto& c : j["cells"]) {
    ReducedSimplicialSet::Cell cell;
    cell.name = id_of(c["id"]);
    if (!c.contains("dim") || !c["dim"].is_number_integer())
      throw parse_error("simplicial set JSON: cell '" + cell.name +
                        "' needs an integer dim");
    cell.dim = c["dim"].get<int>();
    if (c.contains("faces")) {
      if (!c["faces"].is_array())
        throw parse_error("simplicial set JSON: faces must be an array");
      for (const auto& fj : c["faces"]) {
        if (!fj.contains("cell"))
          throw parse_error("simplicial set JSON: face without target cell");
        auto it = ids.find(id_of(fj["cell"]));
        if (it == ids.end())
          throw parse_error("simplicial set JSON: face of '" + cell.name +
                            "' names unknown cell");
        FormalCell fc{{}, it->second};
        if (fj.contains("deg_word")) {
          if (!fj["deg_word"].is_array())
            throw parse_error("simplicial set JSON: deg_word must be an array");
          for (const auto& d : fj["deg_word"]) fc.degens.push_back(d.get<int>());
        }
        cell.faces.push_back(std::move(fc));
      }
    }
    cells.push_back(std::move(cell));
  }
  return ReducedSimplicialSet::from_cells(std::move(cells));
}

std::string sset_to_json(const ReducedSimplicialSet& s) {
  nlohmann::ordered_json out;
  out["cells"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < s.cell_count(); ++k) {
    const auto& c = s.cell(k);
    nlohmann::ordered_json cj;
    cj["id"] = c.name;
    cj["dim"] = c.dim;
    cj["faces"] = nlohmann::ordered_json::array();
    for (const FormalCell& fc : c.faces) {
      nlohmann::ordered_json fj;
      fj["deg_word"] = fc.degens;
      fj["cell"] = s.cell(fc.cell).name;
      cj["faces"].push_back(std::move(fj));
    }
    out["cells"].push_back(std::move(cj));
  }
  return out.dump(2) + "\n";
}

ReducedSimplicialSet builtin_sset(const std::string& name) {
  using Cell = ReducedSimplicialSet::Cell;
  // The totally collapsed n-cell on the vertex: s_{n-1} ... s_1 s_0 v.
  auto collapsed = [](int target_dim, std::size_t vertex_index) {
    FormalCell fc{{}, vertex_index};
    for (int j = target_dim - 1; j >= 0; --j) fc.degens.push_back(j);
    return fc;
  };
  if (name == "sphere2_min") {
    Cell v{"v", 0, {}};
    Cell top{"e2", 2, {collapsed(1, 0), collapsed(1, 0), collapsed(1, 0)}};
    return ReducedSimplicialSet::from_cells({v, top});
  }
  if (name == "sphere3_min") {
    Cell v{"v", 0, {}};
    Cell top{"e3",
             3,
             {collapsed(2, 0), collapsed(2, 0), collapsed(2, 0),
              collapsed(2, 0)}};
    return ReducedSimplicialSet::from_cells({v, top});
  }
  if (name == "wedge_s2_s2") {
    Cell v{"v", 0, {}};
    Cell a{"a", 2, {collapsed(1, 0), collapsed(1, 0), collapsed(1, 0)}};
    Cell b{"b", 2, {collapsed(1, 0), collapsed(1, 0), collapsed(1, 0)}};
    return ReducedSimplicialSet::from_cells({v, a, b});
  }
  throw parse_error("unknown simplicial set '" + name + "'; known: " +
                    [] {
                      std::string s;
                      for (const auto& n : builtin_sset_names()) {
                        if (!s.empty()) s += ", ";
                        s += n;
                      }
                      return s;
                    }());
}

std::vector<std::string> builtin_sset_names() {
  return {"sphere2_min", "sphere3_min", "wedge_s2_s2"};
}

std::string loop_table_to_string(const LoopHomologyTable& t) {
  std::ostringstream out;
  out << "degrees 0..-" << t.depth << " dims ";
  for (int n = 0; n >= -t.depth; --n) {
    if (n != 0) out << ",";
    auto it = t.dims.find(n);
    if (it == t.dims.end())
      out << "?";
    else
      out << it->second;
  }
  if (!t.warning.empty()) out << "\nwarning: " << t.warning;
  out << "\n";
  return out.str();
}

ChainComplex loop_word_complex(const ReducedSimplicialSet& s, const Field& f,
                               int depth) {
  if (depth < 0) throw parse_error("loop words: depth must be >= 0");
  for (std::size_t k : s.cells_of_dim(1))
    throw parse_error("loop words: nondegenerate 1-cell '" + s.cell(k).name +
                      "' (a 1-reduced model is required; letters of degree "
                      "zero would make every degree infinite)");

  // Letters: nondegenerate cells of dimension >= 2, of degree 1 - dim.
  std::vector<std::size_t> letters;
  std::vector<int> letter_deg;
  std::map<std::size_t, std::size_t> letter_of_cell;
  for (int n = 2; n <= s.dim(); ++n)
    for (std::size_t k : s.cells_of_dim(n)) {
      letter_of_cell[k] = letters.size();
      letters.push_back(k);
      letter_deg.push_back(1 - n);
    }

  const int lo = -(depth + 1);
  using Word = std::vector<std::size_t>;
  std::map<int, std::vector<Word>> basis;
  basis[0].push_back({});
  std::vector<Word> frontier = {{}};
  while (!frontier.empty()) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      int deg = 0;
      for (std::size_t t : w) deg += letter_deg[t];
      for (std::size_t l = 0; l < letters.size(); ++l) {
        if (deg + letter_deg[l] < lo) continue;
        Word w2 = w;
        w2.push_back(l);
        basis[deg + letter_deg[l]].push_back(w2);
        next.push_back(std::move(w2));
      }
    }
    frontier = std::move(next);
  }
  for (auto& [deg, words] : basis) std::sort(words.begin(), words.end());

  std::map<int, std::map<Word, std::size_t>> pos;
  ChainComplex out(f);
  for (int n = lo; n <= 0; ++n) {
    auto it = basis.find(n);
    const std::size_t d = it == basis.end() ? 0 : it->second.size();
    out.set_dim(n, d);
    if (d == 0) continue;
    std::vector<std::string> names;
    for (std::size_t t = 0; t < it->second.size(); ++t) {
      pos[n][it->second[t]] = t;
      std::string nm = "[";
      for (std::size_t r = 0; r < it->second[t].size(); ++r) {
        if (r) nm += ".";
        nm += s.cell(letters[it->second[t][r]]).name;
      }
      names.push_back(nm + "]");
    }
    out.labels[n] = names;
  }

  for (int n = lo; n < 0; ++n) {
    auto it = basis.find(n);
    if (it == basis.end() || out.dim(n) == 0 || out.dim(n + 1) == 0) continue;
    Matrix m(out.dim(n + 1), out.dim(n));
    for (std::size_t j = 0; j < it->second.size(); ++j) {
      const Word& w = it->second[j];
      int pre = 0;
      for (std::size_t t = 0; t < w.size(); ++t) {
        const Scalar koszul = (pre % 2 == 0) ? f.one() : f.from_int(-1);
        const std::size_t cell = letters[w[t]];
        const int cdim = s.cell(cell).dim;
        FormalCell z{{}, cell};
        // Face part: letter -> sum of its nondegenerate faces.
        for (int i = 0; i <= cdim; ++i) {
          FormalCell fc = s.face(i, z);
          if (!fc.nondegenerate() || s.cell(fc.cell).dim < 2) continue;
          Word w2 = w;
          w2[t] = letter_of_cell.at(fc.cell);
          const Scalar c =
              f.mul(koszul, (i % 2 == 0) ? f.from_int(-1) : f.one());
          auto p2 = pos.at(n + 1).find(w2);
          if (p2 == pos.at(n + 1).end())
            throw invariant_error("loop words: face term left the basis");
          m.at(p2->second, j) = f.add(m.at(p2->second, j), c);
        }
        // Splitting part: letter -> front.back pairs of the diagonal.
        for (int p = 2; p <= cdim - 2; ++p) {
          FormalCell fr = s.front_face(p, z);
          FormalCell bk = s.back_face(cdim - p, z);
          if (!fr.nondegenerate() || !bk.nondegenerate()) continue;
          Word w2;
          w2.reserve(w.size() + 1);
          for (std::size_t r = 0; r < t; ++r) w2.push_back(w[r]);
          w2.push_back(letter_of_cell.at(fr.cell));
          w2.push_back(letter_of_cell.at(bk.cell));
          for (std::size_t r = t + 1; r < w.size(); ++r) w2.push_back(w[r]);
          const Scalar c =
              f.mul(koszul, (p % 2 == 0) ? f.one() : f.from_int(-1));
          auto p2 = pos.at(n + 1).find(w2);
          if (p2 == pos.at(n + 1).end())
            throw invariant_error("loop words: splitting term left the basis");
          m.at(p2->second, j) = f.add(m.at(p2->second, j), c);
        }
        pre += letter_deg[w[t]];
      }
    }
    out.set_diff(n, std::move(m));
  }
  out.require_valid("loop word complex");
  return out;
}

LoopHomologyTable loop_homology_of_sset(const ReducedSimplicialSet& s,
                                        const Field& f, int depth) {
  ChainComplex c = loop_word_complex(s, f, depth);
  GradedDims h = c.cohomology();
  LoopHomologyTable t;
  t.depth = depth;
  for (int n = 0; n >= -depth; --n) {
    auto it = h.find(n);
    t.dims[n] = it == h.end() ? 0 : it->second;
    t.safe[n] = true;
  }
  return t;
}

}  // namespace cotangent
