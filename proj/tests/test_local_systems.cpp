#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cotangent/local_system.hpp>

using namespace cotangent;

namespace {

Matrix scalar_matrix(const Field& f, long num, long den = 1) {
  Matrix m(1, 1);
  m.at(0, 0) = f.from_fraction(num, den);
  return m;
}

}  // namespace

TEST_CASE("trivial system recovers constant cohomology") {
  for (const char* name : {"circle3", "sphere2", "torus7", "klein"}) {
    SimplicialComplex z = corpus_complex(name);
    for (const Field& f : {Field::rationals(), Field::prime(2)}) {
      LocalSystem p = LocalSystem::trivial(z, f, 1);
      CHECK(p.is_flat());
      CHECK(twisted_cochain_complex(p).cohomology() ==
            z.cochain_complex(f).cohomology());
    }
  }
}

TEST_CASE("rank 3 trivial system triples dimensions") {
  SimplicialComplex z = corpus_complex("torus7");
  Field q = Field::rationals();
  LocalSystem p = LocalSystem::trivial(z, q, 3);
  CHECK(twisted_cochain_complex(p).cohomology() == GradedDims{{0, 3}, {1, 6}, {2, 3}});
}

TEST_CASE("gauge-equivalent systems have constant cohomology") {
  std::uint64_t seed = 1;
  for (const char* name : {"circle3", "torus7", "rp2_6"}) {
    SimplicialComplex z = corpus_complex(name);
    for (const Field& f : {Field::rationals(), Field::prime(5)}) {
      for (int rank : {1, 2}) {
        LocalSystem p = gauge_random_system(z, f, rank, seed++);
        REQUIRE(p.is_flat());
        GradedDims expected;
        for (const auto& [deg, dim] : z.cochain_complex(f).cohomology())
          expected[deg] = dim * static_cast<std::size_t>(rank);
        CHECK(twisted_cochain_complex(p).cohomology() == expected);
      }
    }
  }
}

TEST_CASE("free monodromy on the circle") {
  SimplicialComplex z = corpus_complex("circle3");
  Field q = Field::rationals();
  // Transport 0->1 and 1->2 trivial, 0->2 a free parameter: the holonomy
  // around the circle is that parameter.
  auto with_monodromy = [&](long num, long den) {
    LocalSystem p(z, q, 1);
    p.set_transport(0, 1, scalar_matrix(q, 1));
    p.set_transport(1, 2, scalar_matrix(q, 1));
    p.set_transport(0, 2, scalar_matrix(q, num, den));
    return p;
  };
  // No triangles, so any assignment is flat.
  LocalSystem holonomy2 = with_monodromy(2, 1);
  CHECK(holonomy2.is_flat());
  CHECK(twisted_cochain_complex(holonomy2).cohomology().empty());
  LocalSystem holonomy1 = with_monodromy(1, 1);
  CHECK(twisted_cochain_complex(holonomy1).cohomology() == GradedDims{{0, 1}, {1, 1}});
}

TEST_CASE("flatness is checked") {
  SimplicialComplex z = corpus_complex("sphere2");
  Field q = Field::rationals();
  LocalSystem p = LocalSystem::trivial(z, q, 1);
  p.set_transport(0, 1, scalar_matrix(q, 2));  // breaks every triangle on {0,1}
  CHECK(!p.is_flat());
  CHECK_THROWS_AS(twisted_cochain_complex(p), invariant_error);

  LocalSystem missing(z, q, 1);
  CHECK(!missing.is_flat());
  CHECK_THROWS_AS(missing.require_flat(), invariant_error);
}

TEST_CASE("transport validation") {
  SimplicialComplex z = corpus_complex("circle3");
  Field q = Field::rationals();
  LocalSystem p(z, q, 1);
  CHECK_THROWS_AS(p.set_transport(0, 0, scalar_matrix(q, 1)), parse_error);
  CHECK_THROWS_AS(p.set_transport(0, 1, Matrix::identity(2, q)), parse_error);
  CHECK_THROWS_AS(p.set_transport(0, 1, scalar_matrix(q, 0)), invariant_error);
  p.set_transport(1, 0, scalar_matrix(q, 3));
  CHECK(p.transport(0, 1) == scalar_matrix(q, 1, 3));
  CHECK(p.transport(1, 1) == Matrix::identity(1, q));
  CHECK_THROWS_AS(p.transport(0, 2), invariant_error);
}

TEST_CASE("cocycle basis spans the cocycles") {
  SimplicialComplex z = corpus_complex("torus7");
  auto basis = integer_cocycle_basis(z);
  // dim Z^1 = dim B^1 + dim H^1 = 6 + 2.
  CHECK(basis.size() == 8);
  Field q = Field::rationals();
  ChainComplex c = z.cochain_complex(q);
  for (const auto& zvec : basis) {
    REQUIRE(zvec.size() == z.count(1));
    std::vector<Scalar> v;
    for (long x : zvec) v.push_back(q.from_int(x));
    std::vector<Scalar> dz = mat_apply(q, c.diff(1), v);
    for (const Scalar& s : dz) CHECK(q.is_zero(s));
  }
}

TEST_CASE("nontrivial cocycles exist exactly when H^1 is nonzero") {
  CHECK(nontrivial_cocycle(corpus_complex("torus7")).has_value());
  CHECK(nontrivial_cocycle(corpus_complex("circle3")).has_value());
  CHECK(!nontrivial_cocycle(corpus_complex("sphere2")).has_value());
  CHECK(!nontrivial_cocycle(corpus_complex("interval")).has_value());
}

TEST_CASE("generic exponent system on the torus is acyclic") {
  SimplicialComplex z = corpus_complex("torus7");
  Field q = Field::rationals();
  auto zvec = nontrivial_cocycle(z);
  REQUIRE(zvec.has_value());
  LocalSystem p = exponent_system(z, q, {{*zvec, scalar_matrix(q, 2)}});
  REQUIRE(p.is_flat());
  // A rank-one system with monodromy a power of 2 != 1 somewhere has no
  // cohomology on the torus in any degree.
  CHECK(twisted_cochain_complex(p).cohomology().empty());
}

TEST_CASE("sign systems on the projective plane") {
  SimplicialComplex z = corpus_complex("rp2_6");
  Field q = Field::rationals();
  // The orientation class of rp2 lives in H^1 mod 2 and does not lift to an
  // integer cocycle, but any {0,1} lift of a mod-2 cocycle still gives a
  // flat system of signs.
  auto basis = mod_p_cocycle_basis(z, 2);
  CHECK(basis.size() == 6);  // dim B^1 + dim H^1 = 5 + 1 over F2
  bool found_orientation_system = false;
  for (const auto& zvec : basis) {
    LocalSystem p = exponent_system(z, q, {{zvec, scalar_matrix(q, -1)}});
    REQUIRE(p.is_flat());
    GradedDims h = twisted_cochain_complex(p).cohomology();
    if (h == GradedDims{{2, 1}}) found_orientation_system = true;
  }
  // The orientation system has H^2 = Q (top cohomology of a closed surface
  // with twisted coefficients).
  CHECK(found_orientation_system);
}

TEST_CASE("exponent system rejects bad input") {
  SimplicialComplex z = corpus_complex("circle3");
  Field q = Field::rationals();
  CHECK_THROWS_AS(exponent_system(z, q, {}), parse_error);
  CHECK_THROWS_AS(exponent_system(z, q, {{std::vector<long>(2, 1), scalar_matrix(q, 2)}}),
                  parse_error);
  Matrix a(2, 2), b(2, 2);
  a.at(0, 0) = q.one();
  a.at(0, 1) = q.one();
  a.at(1, 1) = q.one();
  b.at(0, 0) = q.one();
  b.at(1, 0) = q.one();
  b.at(1, 1) = q.one();
  std::vector<long> w(3, 1);
  CHECK_THROWS_AS(exponent_system(z, q, {{w, a}, {w, b}}), invariant_error);
}

TEST_CASE("h1 probe") {
  CHECK(h1_probe_vanishes(corpus_complex("sphere2"), Field::rationals()));
  CHECK(h1_probe_vanishes(corpus_complex("interval"), Field::prime(11)));
  CHECK(!h1_probe_vanishes(corpus_complex("torus7"), Field::rationals()));
  // Mod 2 catches the projective plane even though H^1 over Q vanishes.
  CHECK(!h1_probe_vanishes(corpus_complex("rp2_6"), Field::rationals()));
}
