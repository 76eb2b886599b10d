#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cotangent/cech_module.hpp"

#include <random>

using namespace cotangent;

namespace {

// Dimension of the space of degree-k linear maps T on the total complexes
// with T(m . g) = T(m) . g for every module basis vector m and every algebra
// basis generator g. For free modules this must equal the hom basis size.
std::size_t equivariant_map_dimension(const CechModule& src, const CechModule& dst,
                                      int k) {
  const Field& f = src.field();
  // Unknowns: block entries T[n] : src degree n -> dst degree n + k.
  std::vector<int> degrees;
  std::map<int, std::size_t> offset;
  std::size_t unknowns = 0;
  for (int n = src.complex().min_degree(); n <= src.complex().max_degree(); ++n) {
    offset[n] = unknowns;
    unknowns += dst.basis(n + k).size() * src.basis(n).size();
    degrees.push_back(n);
  }
  auto cell = [&](int n, std::size_t row, std::size_t col) {
    return offset.at(n) + row * src.basis(n).size() + col;
  };

  std::vector<std::vector<Scalar>> rows;
  auto add_constraints = [&](int n, std::size_t j, const Simplex& g) {
    // T(m_j . g) - T(m_j) . g = 0, coordinates in dst degree n + deg g + k.
    int gdeg = CechDga::degree(g);
    const auto& bn = src.basis(n);
    CechModule::Element mg =
        src.act(src.basis_element(bn[j].simplex, bn[j].coord), src.algebra().gen(g));
    std::vector<Scalar> mg_coords = src.coordinates(mg, n + gdeg);
    Matrix act_dst = dst.action_matrix(g, n + k);
    std::size_t out_rows = dst.basis(n + gdeg + k).size();
    for (std::size_t r = 0; r < out_rows; ++r) {
      std::vector<Scalar> row(unknowns, f.zero());
      bool nonzero = false;
      for (std::size_t c = 0; c < mg_coords.size(); ++c) {
        if (f.is_zero(mg_coords[c])) continue;
        row[cell(n + gdeg, r, c)] = f.add(row[cell(n + gdeg, r, c)], mg_coords[c]);
        nonzero = true;
      }
      for (std::size_t c = 0; c < dst.basis(n + k).size(); ++c) {
        if (f.is_zero(act_dst.at(r, c))) continue;
        std::size_t idx = cell(n, c, j);
        row[idx] = f.sub(row[idx], act_dst.at(r, c));
        nonzero = true;
      }
      if (nonzero) rows.push_back(std::move(row));
    }
  };

  for (int n : degrees)
    for (std::size_t j = 0; j < src.basis(n).size(); ++j)
      for (int gd = 0; gd <= src.space().dim(); ++gd)
        for (const Simplex& g : src.space().simplices(gd)) add_constraints(n, j, g);

  if (rows.empty()) return unknowns;
  Matrix sys(rows.size(), unknowns);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < unknowns; ++j) sys.at(i, j) = rows[i][j];
  return unknowns - rank(f, sys);
}

GradedDims hom_dims_oracle(const LocalSystem& p, const LocalSystem& q) {
  return twisted_cochain_complex(hom_system(p, q)).cohomology();
}

// Rank-one system on the 3-vertex circle with the given loop holonomy.
LocalSystem circle_scalar_system(const SimplicialComplex& circle, const Field& f,
                                 long lambda) {
  LocalSystem s(circle, f, 1);
  Matrix one = Matrix::identity(1, f);
  s.set_transport(0, 1, one);
  s.set_transport(1, 2, one);
  Matrix last(1, 1);
  last.at(0, 0) = f.from_int(lambda);
  s.set_transport(0, 2, last);
  return s;
}

void check_module_axioms(const CechModule& m) {
  const CechDga& a = m.algebra();
  std::vector<Simplex> gens;
  for (int k = 0; k <= m.space().dim(); ++k)
    for (const Simplex& s : m.space().simplices(k)) gens.push_back(s);

  std::vector<std::pair<Simplex, std::size_t>> mbasis;
  for (int k = 0; k <= m.space().dim(); ++k)
    for (const Simplex& s : m.space().simplices(k))
      for (std::size_t c = 0; c < m.rank(); ++c) mbasis.emplace_back(s, c);

  for (const auto& [s, c] : mbasis) {
    CechModule::Element x = m.basis_element(s, c);
    // Unit acts as the identity.
    CHECK(m.is_zero(m.sub(m.act(x, a.unit()), x)));
    for (const Simplex& g : gens) {
      // Leibniz for the action: d(x.g) = d(x).g + (-1)^{|x|} x.d(g).
      CechModule::Element lhs = m.d(m.act(x, a.gen(g)));
      CechModule::Element rhs = m.act(m.d(x), a.gen(g));
      CechModule::Element xd = m.act(x, a.d(a.gen(g)));
      int deg = m.total_degree(s, c);
      rhs = (deg % 2 == 0) ? m.add(rhs, xd) : m.sub(rhs, xd);
      CHECK(m.is_zero(m.sub(lhs, rhs)));
    }
  }

  // Associativity on all generator pairs applied to all basis vectors.
  for (const auto& [s, c] : mbasis) {
    CechModule::Element x = m.basis_element(s, c);
    for (const Simplex& g : gens)
      for (const Simplex& h : gens) {
        CechModule::Element left = m.act(m.act(x, a.gen(g)), a.gen(h));
        CechModule::Element right = m.act(x, a.mul(a.gen(g), a.gen(h)));
        CHECK(m.is_zero(m.sub(left, right)));
      }
  }
}

void check_hom_operator_identities(const HomComplex& hc) {
  const CechModule& src = hc.source();
  const CechModule& dst = hc.target();
  std::vector<std::pair<Simplex, std::size_t>> mbasis;
  for (int k = 0; k <= src.space().dim(); ++k)
    for (const Simplex& s : src.space().simplices(k))
      for (std::size_t c = 0; c < src.rank(); ++c) mbasis.emplace_back(s, c);
  std::vector<Simplex> gens;
  for (int k = 0; k <= src.space().dim(); ++k)
    for (const Simplex& s : src.space().simplices(k)) gens.push_back(s);

  for (int k = hc.complex().min_degree(); k <= hc.complex().max_degree(); ++k) {
    std::size_t n = hc.basis(k).size();
    for (std::size_t i = 0; i < n; i += (n > 6 ? n / 6 + 1 : 1)) {
      HomElement phi = hc.basis_hom(k, i);
      HomElement dphi = hc.differential(phi);
      for (const auto& [s, c] : mbasis) {
        CechModule::Element x = src.basis_element(s, c);
        // phi is a module map: phi(x . g) = phi(x) . g, no sign.
        for (const Simplex& g : gens) {
          CechModule::Element lhs = hc.apply(phi, src.act(x, src.algebra().gen(g)));
          CechModule::Element rhs = dst.act(hc.apply(phi, x), dst.algebra().gen(g));
          CHECK(dst.is_zero(dst.sub(lhs, rhs)));
        }
        // The differential is the graded commutator with d on every element.
        CechModule::Element lhs = hc.apply(dphi, x);
        CechModule::Element rhs = dst.d(hc.apply(phi, x));
        CechModule::Element tail = hc.apply(phi, src.d(x));
        rhs = (k % 2 == 0) ? dst.sub(rhs, tail) : dst.add(rhs, tail);
        CHECK(dst.is_zero(dst.sub(lhs, rhs)));
      }
    }
  }
}

}  // namespace

TEST_CASE("module complexes close and have the free rank") {
  for (const char* name : {"interval", "circle3", "sphere2", "rp2_6"}) {
    SimplicialComplex z = corpus_complex(name);
    for (const Field& f : {Field::rationals(), Field::prime(2), Field::prime(7)}) {
      CechDga a(z, f);
      for (int r : {1, 2}) {
        CechModule m(a, LocalSystem::trivial(z, f, r));  // d^2 checked in ctor
        CHECK(m.complex().total_dim() ==
              z.total_simplices() * static_cast<std::size_t>(r));
        if (r == 1) CHECK(m.cohomology() == z.cochain_complex(f).cohomology());
      }
    }
  }
}

TEST_CASE("module cohomology matches the vertex-indexed twisted oracle") {
  std::mt19937_64 rng(20240812);
  for (const char* name : {"circle3", "sphere2", "torus7", "rp2_6"}) {
    SimplicialComplex z = corpus_complex(name);
    for (const Field& f : {Field::rationals(), Field::prime(5)}) {
      CechDga a(z, f);
      for (int r : {1, 2}) {
        LocalSystem p = gauge_random_system(z, f, r, rng());
        CechModule m(a, p);
        CHECK(m.cohomology() == twisted_cochain_complex(p).cohomology());
      }
    }
  }
}

TEST_CASE("module cohomology detects nontrivial monodromy") {
  Field q = Field::rationals();
  SimplicialComplex circle = corpus_complex("circle3");
  CechDga a(circle, q);

  // Scaling monodromy 2 around the circle kills all cohomology.
  CechModule m2(a, circle_scalar_system(circle, q, 2));
  CHECK(m2.cohomology() == GradedDims{});
  CechModule m1(a, circle_scalar_system(circle, q, 1));
  CHECK(m1.cohomology() == GradedDims{{0, 1}, {1, 1}});

  // The orientation system of the projective plane sees only top degree.
  SimplicialComplex rp2 = corpus_complex("rp2_6");
  CechDga arp(rp2, q);
  bool found = false;
  for (const std::vector<long>& z : mod_p_cocycle_basis(rp2, 2)) {
    LocalSystem signs(rp2, q, 1);
    std::size_t e = 0;
    for (const Simplex& edge : rp2.simplices(1)) {
      Matrix t(1, 1);
      t.at(0, 0) = (z[e] % 2 != 0) ? q.from_int(-1) : q.one();
      signs.set_transport(edge[0], edge[1], t);
      ++e;
    }
    if (!signs.is_flat()) continue;
    CechModule ms(arp, signs);
    if (ms.cohomology() == GradedDims{{2, 1}}) found = true;
  }
  CHECK(found);
}

TEST_CASE("module action axioms hold across spaces, fields, and systems") {
  std::mt19937_64 rng(20240813);
  {
    SimplicialComplex z = corpus_complex("circle3");
    Field f = Field::prime(7);
    CechDga a(z, f);
    check_module_axioms(CechModule(a, gauge_random_system(z, f, 2, rng())));
  }
  {
    SimplicialComplex z = corpus_complex("sphere2");
    Field q = Field::rationals();
    CechDga a(z, q);
    check_module_axioms(CechModule(a, LocalSystem::trivial(z, q, 1)));
  }
  {
    SimplicialComplex z = corpus_complex("rp2_6");
    Field f2 = Field::prime(2);
    CechDga a(z, f2);
    check_module_axioms(CechModule(a, gauge_random_system(z, f2, 1, rng())));
  }
}

TEST_CASE("the module is free on one stalk generator per vertex") {
  Field f = Field::prime(5);
  SimplicialComplex z = corpus_complex("sphere2");
  CechDga a(z, f);
  std::mt19937_64 rng(20240814);
  CechModule m(a, gauge_random_system(z, f, 1, rng()));
  for (int k = 0; k <= z.dim(); ++k)
    for (const Simplex& s : z.simplices(k)) {
      CechModule::Element via_action =
          m.act(m.basis_element({s.back()}, 0), a.gen(s));
      CHECK(m.is_zero(m.sub(via_action, m.basis_element(s, 0))));
    }

  // Vertex projectors: unit decomposes into idempotent degree-0 actions.
  for (int n = 0; n <= 2; ++n) {
    std::size_t dim_n = m.basis(n).size();
    if (dim_n == 0) continue;
    Matrix total = Matrix::zero(dim_n, dim_n);
    for (int v = 0; v < z.n_vertices(); ++v) {
      Matrix p = m.action_matrix({v}, n);
      CHECK(mat_mul(f, p, p) == p);
      total = mat_add(f, total, p);
    }
    CHECK(total == Matrix::identity(dim_n, f));
  }
}

TEST_CASE("hom complex closes and computes twisted hom cohomology") {
  std::mt19937_64 rng(20240815);
  for (const char* name : {"circle3", "sphere2", "torus7"}) {
    SimplicialComplex z = corpus_complex(name);
    for (const Field& f : {Field::rationals(), Field::prime(3)}) {
      CechDga a(z, f);
      LocalSystem p = gauge_random_system(z, f, 2, rng());
      LocalSystem q = gauge_random_system(z, f, 1, rng());
      HomComplex hc(CechModule(a, p), CechModule(a, q));  // d^2 checked in ctor
      GradedDims got = hc.cohomology();
      CHECK(got == hom_dims_oracle(p, q));
      auto it = got.find(0);
      std::size_t h0 = it == got.end() ? 0 : it->second;
      CHECK(h0 == flat_hom_dimension(p, q));
    }
  }
}

TEST_CASE("hom cohomology separates distinct monodromies") {
  Field q = Field::rationals();
  SimplicialComplex circle = corpus_complex("circle3");
  CechDga a(circle, q);
  CechModule m2(a, circle_scalar_system(circle, q, 2));
  CechModule m3(a, circle_scalar_system(circle, q, 3));
  CechModule mtriv(a, circle_scalar_system(circle, q, 1));
  // Hom between systems with equal monodromy sees the circle; otherwise nothing.
  CHECK(HomComplex(m2, m2).cohomology() == GradedDims{{0, 1}, {1, 1}});
  CHECK(HomComplex(m2, m3).cohomology() == GradedDims{});
  CHECK(HomComplex(m2, mtriv).cohomology() == GradedDims{});
  CHECK(HomComplex(mtriv, mtriv).cohomology() == GradedDims{{0, 1}, {1, 1}});
}

TEST_CASE("hom elements behave as module maps under apply and compose") {
  std::mt19937_64 rng(20240816);
  Field f = Field::prime(7);
  SimplicialComplex z = corpus_complex("circle3");
  CechDga a(z, f);
  LocalSystem p = gauge_random_system(z, f, 2, rng());
  CechModule m(a, p);
  HomComplex hc(m, m);
  check_hom_operator_identities(hc);

  // Identity is a closed degree-0 map fixing every element.
  HomElement id = hc.identity();
  CHECK(hc.is_zero(hc.differential(id)));
  for (int n = 0; n <= 1; ++n)
    for (std::size_t i = 0; i < m.basis(n).size(); ++i) {
      CechModule::Element x =
          m.basis_element(m.basis(n)[i].simplex, m.basis(n)[i].coord);
      CHECK(m.is_zero(m.sub(hc.apply(id, x), x)));
    }

  // compose(f, g) applies g first; composing with the identity is neutral.
  for (int k = hc.complex().min_degree(); k <= hc.complex().max_degree(); ++k)
    for (std::size_t i = 0; i < hc.basis(k).size(); ++i) {
      HomElement phi = hc.basis_hom(k, i);
      CHECK(hc.is_zero(hc.add(hc.compose(phi, id),
                              hc.scale(f.from_int(-1), phi))));
      CHECK(hc.is_zero(hc.add(hc.compose(id, phi),
                              hc.scale(f.from_int(-1), phi))));
    }

  // Round trip through coordinates.
  for (int k = hc.complex().min_degree(); k <= hc.complex().max_degree(); ++k)
    for (std::size_t i = 0; i < hc.basis(k).size(); ++i) {
      HomElement phi = hc.basis_hom(k, i);
      std::vector<Scalar> v = hc.to_vector(phi);
      HomElement back = hc.from_vector(k, v);
      CHECK(hc.is_zero(hc.add(back, hc.scale(f.from_int(-1), phi))));
    }

  // Composition of cocycles is again a cocycle (endomorphism cup product).
  for (int k = hc.complex().min_degree(); k <= hc.complex().max_degree(); ++k) {
    Matrix cyc = hc.complex().cocycle_basis(k);
    for (std::size_t j = 0; j < cyc.cols(); ++j) {
      HomElement phi = hc.from_vector(k, column_of(cyc, j));
      HomElement sq = hc.compose(phi, phi);
      CHECK(hc.is_zero(hc.differential(sq)));
    }
  }
}

TEST_CASE("hom basis size equals the space of action-equivariant maps") {
  std::mt19937_64 rng(20240817);
  Field f = Field::prime(5);
  for (const char* name : {"interval", "circle3"}) {
    SimplicialComplex z = corpus_complex(name);
    CechDga a(z, f);
    LocalSystem p = gauge_random_system(z, f, 1, rng());
    LocalSystem q = gauge_random_system(z, f, 2, rng());
    CechModule mp(a, p), mq(a, q);
    HomComplex hc(mp, mq);
    for (int k = -1; k <= 2; ++k)
      CHECK(hc.basis(k).size() == equivariant_map_dimension(mp, mq, k));
  }
}

TEST_CASE("graded systems shift module and hom degrees") {
  Field f = Field::prime(3);
  SimplicialComplex z = corpus_complex("circle3");
  CechDga a(z, f);
  GradedLocalSystem g(LocalSystem::trivial(z, f, 2), {0, -1});
  CechModule m(a, g);
  // Two trivial lines in internal degrees 0 and -1: shifted circle cohomology.
  CHECK(m.cohomology() == GradedDims{{-1, 1}, {0, 2}, {1, 1}});

  HomComplex hc(m, m);
  check_hom_operator_identities(hc);
  HomElement id = hc.identity();
  CHECK(hc.is_zero(hc.differential(id)));
  // End of (line_0 + line_{-1}): four blocks, internal degrees -1, 0, 0, 1.
  GradedDims h = hc.cohomology();
  CHECK(h == GradedDims{{-1, 1}, {0, 3}, {1, 3}, {2, 1}});

  // The graded end system sees the same dimensions degree by degree.
  GradedLocalSystem ends = graded_end_system(g);
  GradedDims combined;
  for (int t = ends.min_degree(); t <= ends.max_degree(); ++t) {
    if (ends.coords_of_degree(t).empty()) continue;
    GradedDims piece = twisted_cochain_complex(ends.graded_piece(t)).cohomology();
    for (const auto& [deg, dim] : piece) combined[deg + t] += dim;
  }
  CHECK(h == combined);

  // Filtration levels are target simplex dimensions within range.
  auto filt = hc.cech_filtration();
  for (const auto& [k, levels] : filt) {
    CHECK(levels.size() == hc.basis(k).size());
    for (int lv : levels) {
      CHECK(lv >= 0);
      CHECK(lv <= z.dim());
    }
  }
}
