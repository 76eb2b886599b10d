#include <algorithm>
#include <optional>
#include <sstream>
#include <tuple>

#include "cotangent/bar_cobar.hpp"

namespace cotangent {

namespace {

Scalar sign_pow(const Field& f, long long e) {
  return ((e % 2) + 2) % 2 == 0 ? f.one() : f.neg(f.one());
}

void madd(const Field& f, Matrix& m, std::size_t i, std::size_t j, const Scalar& c) {
  m.at(i, j) = f.add(m.at(i, j), c);
}

Matrix submatrix(const Matrix& m, const std::vector<std::size_t>& rows,
                 const std::vector<std::size_t>& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out.at(i, j) = m.at(rows[i], cols[j]);
  return out;
}

const std::vector<int>& length_at(const std::map<int, std::vector<int>>& length,
                                  int n) {
  static const std::vector<int> empty;
  auto it = length.find(n);
  return it == length.end() ? empty : it->second;
}

}  // namespace

Sdr bar_sdr(const ChainComplex& full,
            const std::map<int, std::vector<int>>& length) {
  const Field& f = full.field;
  for (int n : full.degrees())
    if (length_at(length, n).size() != full.dim(n))
      throw invariant_error("word length data does not match the complex");

  // Length-preserving part of the differential.
  ChainComplex internal(f);
  for (int n : full.degrees()) internal.set_dim(n, full.dim(n));
  internal.labels = full.labels;
  int max_len = 0;
  for (const auto& [n, lens] : length)
    for (int l : lens) max_len = std::max(max_len, l);
  for (int n : full.degrees()) {
    if (full.dim(n) == 0 || full.dim(n + 1) == 0) continue;
    Matrix m = full.diff(n);
    const auto& ls = length_at(length, n);
    const auto& lt = length_at(length, n + 1);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (lt[i] != ls[j]) m.at(i, j) = f.zero();
    internal.set_diff(n, std::move(m));
  }
  internal.require_valid("word-length preserving part of the bar differential");

  // One Gaussian retraction per word-length block.
  std::vector<std::map<int, std::vector<std::size_t>>> block_pos;
  std::vector<Sdr> block_sdr;
  for (int len = 0; len <= max_len; ++len) {
    std::map<int, std::vector<std::size_t>> pos;
    ChainComplex bc(f);
    bool any = false;
    for (int n : full.degrees()) {
      std::vector<std::size_t> idx;
      const auto& ls = length_at(length, n);
      for (std::size_t j = 0; j < ls.size(); ++j)
        if (ls[j] == len) idx.push_back(j);
      if (!idx.empty()) {
        any = true;
        bc.set_dim(n, idx.size());
        auto lit = full.labels.find(n);
        if (lit != full.labels.end()) {
          std::vector<std::string> names;
          for (std::size_t j : idx) names.push_back(lit->second[j]);
          bc.labels[n] = std::move(names);
        }
      }
      pos[n] = std::move(idx);
    }
    if (!any) continue;
    for (int n : full.degrees()) {
      if (pos[n].empty() || pos[n + 1].empty()) continue;
      bc.set_diff(n, submatrix(internal.diff(n), pos[n + 1], pos[n]));
    }
    block_sdr.push_back(gaussian_sdr(bc));
    block_pos.push_back(std::move(pos));
  }

  // Assemble the direct sum of the block retractions.
  ChainComplex small(f);
  std::map<int, std::size_t> small_dim;
  std::map<int, std::vector<std::string>> small_labels;
  std::vector<std::map<int, std::size_t>> offsets(block_sdr.size());
  for (std::size_t bi = 0; bi < block_sdr.size(); ++bi)
    for (int n : block_sdr[bi].small.degrees()) {
      offsets[bi][n] = small_dim[n];
      small_dim[n] += block_sdr[bi].small.dim(n);
      auto lit = block_sdr[bi].small.labels.find(n);
      for (std::size_t j = 0; j < block_sdr[bi].small.dim(n); ++j) {
        std::ostringstream os;
        if (lit != block_sdr[bi].small.labels.end())
          os << lit->second[j];
        else
          os << "s" << n << "[" << j << "]";
        small_labels[n].push_back(os.str());
      }
    }
  for (const auto& [n, d] : small_dim) small.set_dim(n, d);
  small.labels = small_labels;

  Sdr base(internal, small);
  auto place_include = [&](int n) {
    Matrix m(full.dim(n), small.dim(n));
    for (std::size_t bi = 0; bi < block_sdr.size(); ++bi) {
      auto pit = block_pos[bi].find(n);
      if (pit == block_pos[bi].end() || pit->second.empty()) continue;
      if (block_sdr[bi].small.dim(n) == 0) continue;
      Matrix bm = block_sdr[bi].include_at(n);
      const std::size_t off = offsets[bi].at(n);
      for (std::size_t i = 0; i < bm.rows(); ++i)
        for (std::size_t j = 0; j < bm.cols(); ++j)
          m.at(pit->second[i], off + j) = bm.at(i, j);
    }
    return m;
  };
  auto place_project = [&](int n) {
    Matrix m(small.dim(n), full.dim(n));
    for (std::size_t bi = 0; bi < block_sdr.size(); ++bi) {
      auto pit = block_pos[bi].find(n);
      if (pit == block_pos[bi].end() || pit->second.empty()) continue;
      if (block_sdr[bi].small.dim(n) == 0) continue;
      Matrix bm = block_sdr[bi].project_at(n);
      const std::size_t off = offsets[bi].at(n);
      for (std::size_t i = 0; i < bm.rows(); ++i)
        for (std::size_t j = 0; j < bm.cols(); ++j)
          m.at(off + i, pit->second[j]) = bm.at(i, j);
    }
    return m;
  };
  auto place_homotopy = [&](int n) {
    Matrix m(full.dim(n - 1), full.dim(n));
    for (std::size_t bi = 0; bi < block_sdr.size(); ++bi) {
      auto pn = block_pos[bi].find(n);
      auto pm = block_pos[bi].find(n - 1);
      if (pn == block_pos[bi].end() || pm == block_pos[bi].end()) continue;
      if (pn->second.empty() || pm->second.empty()) continue;
      Matrix bm = block_sdr[bi].homotopy_at(n);
      for (std::size_t i = 0; i < bm.rows(); ++i)
        for (std::size_t j = 0; j < bm.cols(); ++j)
          if (!f.is_zero(bm.at(i, j)))
            m.at(pm->second[i], pn->second[j]) = bm.at(i, j);
    }
    return m;
  };
  for (int n : full.degrees()) {
    if (full.dim(n) == 0) continue;
    if (small.dim(n) > 0) {
      base.include[n] = place_include(n);
      base.project[n] = place_project(n);
    }
    if (full.dim(n - 1) > 0) {
      Matrix h = place_homotopy(n);
      if (!is_zero_matrix(f, h)) base.homotopy[n] = std::move(h);
    }
  }

  // Feed the length-lowering part to the perturbation series.
  std::map<int, Matrix> delta;
  for (int n : full.degrees()) {
    if (full.dim(n) == 0 || full.dim(n + 1) == 0) continue;
    Matrix d = mat_sub(f, full.diff(n), internal.diff(n));
    if (!is_zero_matrix(f, d)) delta[n] = std::move(d);
  }
  return perturb_sdr(base, delta);
}

// ---------------------------------------------------------------------------
// Endomorphisms of the truncated resolution
// ---------------------------------------------------------------------------

namespace {

struct HomBasis {
  int s;  // source degree
  std::size_t a, b;
};

struct HomIndexing {
  std::map<int, std::vector<HomBasis>> basis;
  // Keyed by (hom degree, source degree, source position, value position):
  // the value position alone does not determine the value's degree.
  std::map<std::tuple<int, int, std::size_t, std::size_t>, std::size_t> index;
};

HomIndexing enumerate_hom(const ChainComplex& A, const ChainComplex& B) {
  HomIndexing out;
  for (int s : A.degrees()) {
    if (A.dim(s) == 0) continue;
    for (int t : B.degrees()) {
      if (B.dim(t) == 0) continue;
      const int n = t - s;
      auto& bucket = out.basis[n];
      for (std::size_t a = 0; a < A.dim(s); ++a)
        for (std::size_t b = 0; b < B.dim(t); ++b) {
          out.index[{n, s, a, b}] = bucket.size();
          bucket.push_back({s, a, b});
        }
    }
  }
  return out;
}

std::vector<std::string> hom_labels(const ChainComplex& A, const ChainComplex& B,
                                    const std::vector<HomBasis>& bucket, int n) {
  std::vector<std::string> names;
  for (const HomBasis& e : bucket) {
    std::ostringstream os;
    auto la = A.labels.find(e.s);
    auto lb = B.labels.find(e.s + n);
    if (la != A.labels.end())
      os << la->second[e.a];
    else
      os << "a" << e.s << "[" << e.a << "]";
    os << " -> ";
    if (lb != B.labels.end())
      os << lb->second[e.b];
    else
      os << "b" << (e.s + n) << "[" << e.b << "]";
    names.push_back(os.str());
  }
  return names;
}

}  // namespace

ChainComplex endomorphism_complex(const BarConstruction& bar) {
  const CechDga& a = bar.algebra();
  const Field& f = a.field();
  const std::vector<Simplex>& letters = a.ideal_basis();
  const ChainComplex& A = bar.coalgebra();
  const ChainComplex& B = bar.resolution();
  HomIndexing hom = enumerate_hom(A, B);

  ChainComplex out(f);
  for (const auto& [n, bucket] : hom.basis) {
    out.set_dim(n, bucket.size());
    out.labels[n] = hom_labels(A, B, bucket, n);
  }

  for (const auto& [n, bucket] : hom.basis) {
    auto up = hom.basis.find(n + 1);
    if (up == hom.basis.end() || up->second.empty()) continue;
    Matrix m(up->second.size(), bucket.size());
    for (std::size_t j = 0; j < bucket.size(); ++j) {
      const auto& [s, av, bv] = bucket[j];
      // Post-compose with the resolution differential.
      {
        Matrix db = B.diff(s + n);
        for (std::size_t i = 0; i < db.rows(); ++i)
          if (!f.is_zero(db.at(i, bv)))
            madd(f, m, hom.index.at({n + 1, s, av, i}), j, db.at(i, bv));
      }
      // Pre-compose with the coalgebra differential: -(-1)^n.
      if (A.dim(s - 1) > 0) {
        Matrix da = A.diff(s - 1);
        for (std::size_t x = 0; x < da.cols(); ++x)
          if (!f.is_zero(da.at(av, x)))
            madd(f, m, hom.index.at({n + 1, s - 1, x, bv}), j,
                 f.mul(f.neg(sign_pow(f, n)), da.at(av, x)));
      }
      // Pre-compose with the action term: the generator picks up one more
      // letter and the value is right-multiplied by it, with -(-1)^{n+s}.
      {
        const BarWord& u = bar.coalgebra_basis(s)[av];
        const auto& val = bar.resolution_basis(s + n)[bv];
        if (static_cast<int>(u.size()) < bar.word_bound()) {
          for (std::size_t l = 0; l < letters.size(); ++l) {
            auto pr = a.mul_basis(val.cell, letters[l]);
            if (!pr) continue;
            BarWord w = u;
            w.push_back(l);
            auto wp = bar.coalgebra_index(w);
            if (!wp) throw invariant_error("extended word left the truncated basis");
            const int s2 = s + CechDga::degree(letters[l]) - 1;
            auto b2 = bar.resolution_index(val.word, pr->first);
            if (!b2) throw invariant_error("action left the resolution basis");
            madd(f, m, hom.index.at({n + 1, s2, *wp, *b2}), j,
                 f.mul(sign_pow(f, n + s), pr->second));
          }
        }
      }
    }
    out.set_diff(n, std::move(m));
  }
  out.require_valid("endomorphism complex of the truncated resolution");
  return out;
}

ChainComplex endomorphism_model(const BarConstruction& bar) {
  const CechDga& a = bar.algebra();
  const Field& f = a.field();
  const std::vector<Simplex>& letters = a.ideal_basis();
  const ChainComplex& A = bar.coalgebra();
  const ChainComplex& B = bar.resolution();

  std::map<int, std::vector<int>> len_a, len_b;
  for (int n : A.degrees()) {
    std::vector<int> ls;
    for (const BarWord& u : bar.coalgebra_basis(n))
      ls.push_back(static_cast<int>(u.size()));
    len_a[n] = std::move(ls);
  }
  for (int n : B.degrees()) {
    std::vector<int> ls;
    for (const auto& e : bar.resolution_basis(n))
      ls.push_back(static_cast<int>(e.word.size()));
    len_b[n] = std::move(ls);
  }
  Sdr sa = bar_sdr(A, len_a);
  Sdr sb = bar_sdr(B, len_b);

  // Right action of each letter on the resolution basis.
  std::vector<std::map<int, std::vector<std::optional<std::pair<std::size_t, Scalar>>>>>
      act(letters.size());
  for (std::size_t l = 0; l < letters.size(); ++l)
    for (int t : B.degrees()) {
      if (B.dim(t) == 0) continue;
      auto& tab = act[l][t];
      tab.resize(B.dim(t));
      const auto& bucket = bar.resolution_basis(t);
      for (std::size_t i = 0; i < bucket.size(); ++i) {
        auto pr = a.mul_basis(bucket[i].cell, letters[l]);
        if (!pr) continue;
        auto pos = bar.resolution_index(bucket[i].word, pr->first);
        if (!pos) throw invariant_error("action left the resolution basis");
        tab[i] = std::make_pair(*pos, pr->second);
      }
    }

  // For each word of positive length: its prefix's (degree, position) and
  // its final letter.
  struct Pop {
    int sp;
    std::size_t posp;
    std::size_t letter;
  };
  std::map<int, std::vector<std::optional<Pop>>> pops;
  for (int n : A.degrees()) {
    auto& v = pops[n];
    for (const BarWord& u : bar.coalgebra_basis(n)) {
      if (u.empty()) {
        v.push_back(std::nullopt);
        continue;
      }
      BarWord prefix(u.begin(), u.end() - 1);
      auto pos = bar.coalgebra_index(prefix);
      if (!pos) throw invariant_error("word prefix left the truncated basis");
      v.push_back(Pop{bar.word_degree(prefix), *pos, u.back()});
    }
  }

  using Hom = std::map<int, Matrix>;  // keyed by source degree
  auto prune = [&](Hom& h) {
    for (auto it = h.begin(); it != h.end();)
      it = is_zero_matrix(f, it->second) ? h.erase(it) : std::next(it);
  };

  // delta: couple the action term, raising the consumed word length by one.
  auto apply_delta = [&](const Hom& phi, int m) {
    Hom out;
    for (int s2 : A.degrees()) {
      if (A.dim(s2) == 0 || B.dim(s2 + m + 1) == 0) continue;
      const auto& pv = pops.at(s2);
      Matrix o(B.dim(s2 + m + 1), A.dim(s2));
      bool any = false;
      for (std::size_t jw = 0; jw < pv.size(); ++jw) {
        if (!pv[jw]) continue;
        const Pop& p = *pv[jw];
        auto it = phi.find(p.sp);
        if (it == phi.end()) continue;
        auto tit = act[p.letter].find(p.sp + m);
        if (tit == act[p.letter].end()) continue;
        const Matrix& src = it->second;
        const Scalar sign = sign_pow(f, m + p.sp);
        const auto& tab = tit->second;
        for (std::size_t i = 0; i < src.rows(); ++i) {
          if (f.is_zero(src.at(i, p.posp))) continue;
          if (!tab[i]) continue;
          madd(f, o, tab[i]->first, jw,
               f.mul(sign, f.mul(tab[i]->second, src.at(i, p.posp))));
          any = true;
        }
      }
      if (any) out[s2] = std::move(o);
    }
    prune(out);
    return out;
  };

  std::map<int, Matrix> ibpb;
  auto ibpb_at = [&](int t) -> const Matrix& {
    auto it = ibpb.find(t);
    if (it == ibpb.end())
      it = ibpb.emplace(t, mat_mul(f, sb.include_at(t), sb.project_at(t))).first;
    return it->second;
  };

  // Homotopy on homomorphisms: h_B phi + (-1)^m (i_B p_B) phi h_A.
  auto apply_h = [&](const Hom& phi, int m) {
    Hom out;
    for (const auto& [s, mat] : phi) {
      Matrix t1 = mat_mul(f, sb.homotopy_at(s + m), mat);
      if (!is_zero_matrix(f, t1)) {
        auto it = out.find(s);
        if (it == out.end())
          out[s] = std::move(t1);
        else
          it->second = mat_add(f, it->second, t1);
      }
      if (A.dim(s + 1) > 0) {
        Matrix t2 = mat_mul(f, mat, sa.homotopy_at(s + 1));
        t2 = mat_mul(f, ibpb_at(s + m), t2);
        t2 = mat_scale(f, sign_pow(f, m), t2);
        if (!is_zero_matrix(f, t2)) {
          auto it = out.find(s + 1);
          if (it == out.end())
            out[s + 1] = std::move(t2);
          else
            it->second = mat_add(f, it->second, t2);
        }
      }
    }
    prune(out);
    return out;
  };

  HomIndexing hom = enumerate_hom(sa.small, sb.small);
  ChainComplex out(f);
  for (const auto& [n, bucket] : hom.basis) {
    out.set_dim(n, bucket.size());
    out.labels[n] = hom_labels(sa.small, sb.small, bucket, n);
  }

  for (const auto& [n, bucket] : hom.basis) {
    auto up = hom.basis.find(n + 1);
    if (up == hom.basis.end() || up->second.empty()) continue;
    Matrix m(up->second.size(), bucket.size());
    for (std::size_t j = 0; j < bucket.size(); ++j) {
      const auto& [s0, a0, b0] = bucket[j];
      // Base part: the homomorphism differential of the two small models.
      {
        Matrix db = sb.small.diff(s0 + n);
        for (std::size_t i = 0; i < db.rows(); ++i)
          if (!f.is_zero(db.at(i, b0)))
            madd(f, m, hom.index.at({n + 1, s0, a0, i}), j, db.at(i, b0));
        if (sa.small.dim(s0 - 1) > 0) {
          Matrix da = sa.small.diff(s0 - 1);
          for (std::size_t x = 0; x < da.cols(); ++x)
            if (!f.is_zero(da.at(a0, x)))
              madd(f, m, hom.index.at({n + 1, s0 - 1, x, b0}), j,
                   f.mul(f.neg(sign_pow(f, n)), da.at(a0, x)));
        }
      }
      // Transferred part: P delta (H delta)^r I.
      Hom phi;
      {
        std::vector<Scalar> ib = column_of(sb.include_at(s0 + n), b0);
        Matrix pa = sa.project_at(s0);
        Matrix rank1(B.dim(s0 + n), A.dim(s0));
        for (std::size_t i = 0; i < ib.size(); ++i) {
          if (f.is_zero(ib[i])) continue;
          for (std::size_t c = 0; c < pa.cols(); ++c)
            if (!f.is_zero(pa.at(a0, c)))
              rank1.at(i, c) = f.mul(ib[i], pa.at(a0, c));
        }
        if (!is_zero_matrix(f, rank1)) phi[s0] = std::move(rank1);
      }
      Hom u = apply_delta(phi, n);
      int rounds = 0;
      while (!u.empty()) {
        if (++rounds > bar.word_bound() + 2)
          throw invariant_error(
              "endomorphism transfer series did not terminate");
        // Project the current term onto the small homomorphisms.
        for (const auto& [s, mat] : u) {
          Matrix ps = mat_mul(f, sb.project_at(s + n + 1), mat);
          ps = mat_mul(f, ps, sa.include_at(s));
          for (std::size_t bi = 0; bi < ps.rows(); ++bi)
            for (std::size_t ai = 0; ai < ps.cols(); ++ai)
              if (!f.is_zero(ps.at(bi, ai))) {
                auto it = hom.index.find({n + 1, s, ai, bi});
                if (it == hom.index.end())
                  throw invariant_error("transferred term left its degree");
                madd(f, m, it->second, j, ps.at(bi, ai));
              }
        }
        u = apply_delta(apply_h(u, n + 1), n);
      }
    }
    out.set_diff(n, std::move(m));
  }
  out.require_valid("transferred endomorphism model");
  return out;
}

}  // namespace cotangent
