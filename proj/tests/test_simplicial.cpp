#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cotangent/simplicial.hpp>

#include <map>

using namespace cotangent;

namespace {

// Each edge of a closed surface triangulation lies in exactly two triangles.
bool edges_have_two_cofaces(const SimplicialComplex& c) {
  std::map<Simplex, int> count;
  for (const Simplex& t : c.simplices(2)) {
    for (std::size_t j = 0; j < 3; ++j) {
      Simplex e = t;
      e.erase(e.begin() + static_cast<long>(j));
      ++count[e];
    }
  }
  if (count.size() != c.count(1)) return false;
  for (const auto& [e, n] : count)
    if (n != 2) return false;
  return true;
}

GradedDims cohomology_over(const SimplicialComplex& c, const Field& f) {
  return c.cochain_complex(f).cohomology();
}

}  // namespace

TEST_CASE("facet closure generates all faces") {
  SimplicialComplex c = SimplicialComplex::from_facets(3, {{0, 1, 2}});
  CHECK(c.dim() == 2);
  CHECK(c.count(0) == 3);
  CHECK(c.count(1) == 3);
  CHECK(c.count(2) == 1);
  CHECK(c.has({0, 2}));
  CHECK(c.index_of({1, 2}) == 2);
  CHECK(!c.has({0, 3}));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(SimplicialComplex::from_facets(2, {{0, 0}}), parse_error);
  CHECK_THROWS_AS(SimplicialComplex::from_facets(2, {{0, 5}}), parse_error);
  CHECK_THROWS_AS(SimplicialComplex::from_facets(0, {}), parse_error);
  CHECK_THROWS_AS(corpus_complex("dodecahedron"), parse_error);
  // Unordered input is normalized.
  SimplicialComplex c = SimplicialComplex::from_facets(3, {{2, 0, 1}});
  CHECK(c.has({0, 1, 2}));
}

TEST_CASE("isolated vertices still contribute to H^0") {
  SimplicialComplex c = SimplicialComplex::from_facets(3, {{0, 1}});
  CHECK(!c.is_connected());
  CHECK(cohomology_over(c, Field::rationals()) == GradedDims{{0, 2}});
}

TEST_CASE("point and interval are acyclic") {
  for (const char* name : {"point", "interval"}) {
    SimplicialComplex c = corpus_complex(name);
    CHECK(c.euler_characteristic() == 1);
    CHECK(cohomology_over(c, Field::rationals()) == GradedDims{{0, 1}});
    CHECK(cohomology_over(c, Field::prime(2)) == GradedDims{{0, 1}});
  }
}

TEST_CASE("triangle boundary is a circle") {
  SimplicialComplex c = corpus_complex("circle3");
  CHECK(c.euler_characteristic() == 0);
  CHECK(c.is_connected());
  CHECK(cohomology_over(c, Field::rationals()) == GradedDims{{0, 1}, {1, 1}});
}

TEST_CASE("tetrahedron boundary is a 2-sphere") {
  SimplicialComplex c = corpus_complex("sphere2");
  CHECK(c.count(0) == 4);
  CHECK(c.count(1) == 6);
  CHECK(c.count(2) == 4);
  CHECK(c.euler_characteristic() == 2);
  CHECK(edges_have_two_cofaces(c));
  for (const Field& f : {Field::rationals(), Field::prime(2), Field::prime(5)})
    CHECK(cohomology_over(c, f) == GradedDims{{0, 1}, {2, 1}});
}

TEST_CASE("seven-vertex torus") {
  SimplicialComplex c = corpus_complex("torus7");
  CHECK(c.count(0) == 7);
  CHECK(c.count(1) == 21);
  CHECK(c.count(2) == 14);
  CHECK(c.euler_characteristic() == 0);
  CHECK(edges_have_two_cofaces(c));
  GradedDims torus{{0, 1}, {1, 2}, {2, 1}};
  for (const Field& f : {Field::rationals(), Field::prime(2), Field::prime(7)})
    CHECK(cohomology_over(c, f) == torus);
}

TEST_CASE("six-vertex projective plane") {
  SimplicialComplex c = corpus_complex("rp2_6");
  CHECK(c.count(0) == 6);
  CHECK(c.count(1) == 15);
  CHECK(c.count(2) == 10);
  CHECK(c.euler_characteristic() == 1);
  CHECK(edges_have_two_cofaces(c));
  CHECK(cohomology_over(c, Field::rationals()) == GradedDims{{0, 1}});
  CHECK(cohomology_over(c, Field::prime(3)) == GradedDims{{0, 1}});
  // Mod 2 the projective plane has one class in each degree.
  CHECK(cohomology_over(c, Field::prime(2)) == GradedDims{{0, 1}, {1, 1}, {2, 1}});
}

TEST_CASE("nine-vertex Klein bottle") {
  SimplicialComplex c = corpus_complex("klein");
  CHECK(c.count(0) == 9);
  CHECK(c.count(1) == 27);
  CHECK(c.count(2) == 18);
  CHECK(c.euler_characteristic() == 0);
  CHECK(edges_have_two_cofaces(c));
  CHECK(cohomology_over(c, Field::rationals()) == GradedDims{{0, 1}, {1, 1}});
  CHECK(cohomology_over(c, Field::prime(5)) == GradedDims{{0, 1}, {1, 1}});
  // Mod 2 torsion in the first homology shows up in degrees 1 and 2.
  CHECK(cohomology_over(c, Field::prime(2)) == GradedDims{{0, 1}, {1, 2}, {2, 1}});
}

TEST_CASE("cochain labels track simplices") {
  SimplicialComplex c = corpus_complex("interval");
  ChainComplex cc = c.cochain_complex(Field::rationals());
  REQUIRE(cc.labels.count(1) == 1);
  CHECK(cc.labels[1][0] == "{0,1}");
}
