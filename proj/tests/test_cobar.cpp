#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "cotangent/bar_cobar.hpp"
#include "cotangent/cech_dga.hpp"
#include "cotangent/simplicial_set.hpp"

using namespace cotangent;

namespace {

using Cell = ReducedSimplicialSet::Cell;

// The totally collapsed n-cell on the vertex.
FormalCell collapsed(int n, std::size_t vertex) {
  FormalCell fc{{}, vertex};
  for (int j = n - 1; j >= 0; --j) fc.degens.push_back(j);
  return fc;
}

std::vector<std::size_t> table_row(const LoopHomologyTable& t) {
  std::vector<std::size_t> out;
  for (int n = 0; n >= -t.depth; --n) out.push_back(t.dims.at(n));
  return out;
}

}  // namespace

TEST_CASE("single-cell sphere models produce free word tables") {
  Field q = Field::rationals();
  CHECK(table_row(loop_homology_of_sset(builtin_sset("sphere2_min"), q, 5)) ==
        std::vector<std::size_t>{1, 1, 1, 1, 1, 1});
  CHECK(table_row(loop_homology_of_sset(builtin_sset("sphere3_min"), q, 6)) ==
        std::vector<std::size_t>{1, 0, 1, 0, 1, 0, 1});
  CHECK(table_row(loop_homology_of_sset(builtin_sset("wedge_s2_s2"), q, 2)) ==
        std::vector<std::size_t>{1, 2, 4});
  // Same pattern over a small prime field and at other depths.
  Field f2 = Field::prime(2);
  CHECK(table_row(loop_homology_of_sset(builtin_sset("sphere2_min"), f2, 6)) ==
        std::vector<std::size_t>{1, 1, 1, 1, 1, 1, 1});
  CHECK(table_row(loop_homology_of_sset(builtin_sset("sphere3_min"), f2, 4)) ==
        std::vector<std::size_t>{1, 0, 1, 0, 1});
  CHECK(loop_homology_of_sset(builtin_sset("sphere2_min"), q, 0).dims ==
        std::map<int, std::size_t>{{0, 1}});
}

TEST_CASE("normalized chains of the builtins have the right homology") {
  Field q = Field::rationals();
  CHECK(builtin_sset("sphere2_min").normalized_chains(q).cohomology() ==
        GradedDims{{-2, 1}, {0, 1}});
  CHECK(builtin_sset("sphere3_min").normalized_chains(q).cohomology() ==
        GradedDims{{-3, 1}, {0, 1}});
  CHECK(builtin_sset("wedge_s2_s2").normalized_chains(q).cohomology() ==
        GradedDims{{-2, 2}, {0, 1}});
}

TEST_CASE("products multiply cell counts and homology correctly") {
  ReducedSimplicialSet p2 =
      sset_product(builtin_sset("sphere2_min"), builtin_sset("sphere2_min"));
  CHECK(p2.count(0) == 1);
  CHECK(p2.count(1) == 0);
  CHECK(p2.count(2) == 3);
  CHECK(p2.count(3) == 6);
  CHECK(p2.count(4) == 6);
  Field q = Field::rationals();
  CHECK(p2.normalized_chains(q).cohomology() ==
        GradedDims{{-4, 1}, {-2, 2}, {0, 1}});

  ReducedSimplicialSet p3 =
      sset_product(builtin_sset("sphere2_min"), builtin_sset("sphere3_min"));
  CHECK(p3.normalized_chains(q).cohomology() ==
        GradedDims{{-5, 1}, {-3, 1}, {-2, 1}, {0, 1}});
}

TEST_CASE("product loop tables are the convolution of the factors") {
  Field q = Field::rationals(), f2 = Field::prime(2);
  ReducedSimplicialSet p2 =
      sset_product(builtin_sset("sphere2_min"), builtin_sset("sphere2_min"));
  // Factor tables are all ones, so the product's is 1,2,3,...
  CHECK(table_row(loop_homology_of_sset(p2, q, 4)) ==
        std::vector<std::size_t>{1, 2, 3, 4, 5});
  CHECK(table_row(loop_homology_of_sset(p2, f2, 4)) ==
        std::vector<std::size_t>{1, 2, 3, 4, 5});
  ReducedSimplicialSet p3 =
      sset_product(builtin_sset("sphere2_min"), builtin_sset("sphere3_min"));
  CHECK(table_row(loop_homology_of_sset(p3, q, 4)) ==
        std::vector<std::size_t>{1, 1, 2, 2, 3});
}

TEST_CASE("front and back faces halve the diagonal coassociatively") {
  ReducedSimplicialSet p =
      sset_product(builtin_sset("sphere2_min"), builtin_sset("sphere3_min"));
  for (std::size_t k = 0; k < p.cell_count(); ++k) {
    const int n = p.cell(k).dim;
    FormalCell z{{}, k};
    CHECK(p.front_face(n, z) == z);
    CHECK(p.back_face(n, z) == z);
    CHECK(p.formal_dim(p.front_face(0, z)) == 0);
    // Splitting the front again agrees with splitting the back: both
    // compute the middle third of a double split.
    for (int r = 0; r <= n; ++r)
      for (int q = 0; q <= r; ++q) {
        FormalCell lhs = p.back_face(r - q, p.front_face(r, z));
        FormalCell rhs = p.front_face(r - q, p.back_face(n - q, z));
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("a two-cell with an attached three-cell kills rational loops") {
  // One 2-cell a and a 3-cell glued so its boundary is 2a: rationally the
  // space is trivial, so the loop table collapses to the ground field.
  Cell v{"v", 0, {}};
  Cell a{"a", 2, {collapsed(1, 0), collapsed(1, 0), collapsed(1, 0)}};
  FormalCell af{{}, 1};
  Cell c{"c", 3, {af, collapsed(2, 0), af, collapsed(2, 0)}};
  ReducedSimplicialSet s = ReducedSimplicialSet::from_cells({v, a, c});
  Field q = Field::rationals();
  CHECK(s.normalized_chains(q).cohomology() == GradedDims{{0, 1}});
  CHECK(table_row(loop_homology_of_sset(s, q, 3)) ==
        std::vector<std::size_t>{1, 0, 0, 0});
  // Over F2 the three-cell no longer cancels the two-cell.
  Field f2 = Field::prime(2);
  CHECK(s.normalized_chains(f2).cohomology() ==
        GradedDims{{-3, 1}, {-2, 1}, {0, 1}});
}

TEST_CASE("deeper truncations extend shallower tables unchanged") {
  Field q = Field::rationals();
  ReducedSimplicialSet p =
      sset_product(builtin_sset("sphere2_min"), builtin_sset("sphere2_min"));
  LoopHomologyTable shallow = loop_homology_of_sset(p, q, 2);
  LoopHomologyTable deep = loop_homology_of_sset(p, q, 4);
  for (int n = 0; n >= -2; --n) CHECK(shallow.dims.at(n) == deep.dims.at(n));
}

TEST_CASE("loop tables agree with the dual word algebra route on a sphere") {
  Field f2 = Field::prime(2);
  LoopHomologyTable direct =
      loop_homology_of_sset(builtin_sset("sphere2_min"), f2, 3);
  CechDga a(corpus_complex("sphere2"), f2);
  BarConstruction bar(a, 3);
  GradedDims dual = DualWordAlgebra(bar).complex().cohomology();
  auto lo = dual_window_min(ideal_connectivity(a), 3);
  REQUIRE(lo == -3);
  for (int n = 0; n >= *lo; --n) {
    std::size_t want = dual.count(n) ? dual.at(n) : 0;
    CHECK(direct.dims.at(n) == want);
  }
}

TEST_CASE("validation rejects malformed cell data") {
  Cell v{"v", 0, {}};
  Cell v2{"w", 0, {}};
  Cell a{"a", 2, {collapsed(1, 0), collapsed(1, 0), collapsed(1, 0)}};
  // Two vertices.
  CHECK_THROWS_AS(ReducedSimplicialSet::from_cells({v, v2, a}), parse_error);
  // Wrong face count.
  Cell short_faces{"a", 2, {collapsed(1, 0), collapsed(1, 0)}};
  CHECK_THROWS_AS(ReducedSimplicialSet::from_cells({v, short_faces}),
                  parse_error);
  // Wrong face dimension.
  Cell bad_dim{"a", 2, {collapsed(2, 0), collapsed(1, 0), collapsed(1, 0)}};
  CHECK_THROWS_AS(ReducedSimplicialSet::from_cells({v, bad_dim}), parse_error);
  // Non-canonical degeneracy word.
  Cell bad_word{"a", 3, {}};
  bad_word.faces.assign(4, FormalCell{{0, 1}, 0});
  CHECK_THROWS_AS(ReducedSimplicialSet::from_cells({v, bad_word}), parse_error);
  // Duplicate ids.
  CHECK_THROWS_AS(ReducedSimplicialSet::from_cells({v, a, a}), parse_error);
}

TEST_CASE("validation catches a simplicial identity violation") {
  // A 4-cell whose first two faces collapse inconsistently: d_0 d_1 lands on
  // b while d_0 d_0 lands on a, but the identities force them equal.
  Cell v{"v", 0, {}};
  Cell a{"a", 2, {collapsed(1, 0), collapsed(1, 0), collapsed(1, 0)}};
  Cell b{"b", 2, {collapsed(1, 0), collapsed(1, 0), collapsed(1, 0)}};
  FormalCell s0a{{0}, 1}, s0b{{0}, 2}, s2a{{2}, 1};
  Cell x{"x", 4, {s0a, s0b, s2a, s2a, s2a}};
  CHECK_THROWS_WITH_AS(ReducedSimplicialSet::from_cells({v, a, b, x}),
                       doctest::Contains("'x' violates"), parse_error);
}

TEST_CASE("loop words require a model without nondegenerate edges") {
  Cell v{"v", 0, {}};
  Cell e{"e", 1, {FormalCell{{}, 0}, FormalCell{{}, 0}}};
  ReducedSimplicialSet circle = ReducedSimplicialSet::from_cells({v, e});
  Field q = Field::rationals();
  // The circle is a perfectly good one-vertex model...
  CHECK(circle.normalized_chains(q).cohomology() ==
        GradedDims{{-1, 1}, {0, 1}});
  // ...but its loop space has infinite-dimensional degree-zero homology.
  CHECK_THROWS_WITH_AS(loop_word_complex(circle, q, 2),
                       doctest::Contains("'e'"), parse_error);
}

TEST_CASE("simplicial sets survive a JSON round trip") {
  for (const std::string& name : builtin_sset_names()) {
    ReducedSimplicialSet s = builtin_sset(name);
    CHECK(sset_from_json(sset_to_json(s)) == s);
  }
  ReducedSimplicialSet p =
      sset_product(builtin_sset("sphere2_min"), builtin_sset("sphere2_min"));
  CHECK(sset_from_json(sset_to_json(p)) == p);
}

TEST_CASE("JSON parsing reports structural problems") {
  CHECK_THROWS_AS(sset_from_json("not json"), parse_error);
  CHECK_THROWS_AS(sset_from_json("{\"cells\": 3}"), parse_error);
  CHECK_THROWS_AS(sset_from_json("{\"cells\": [{\"dim\": 0}]}"), parse_error);
  // Unknown face target.
  CHECK_THROWS_AS(
      sset_from_json(
          R"({"cells":[{"id":"v","dim":0},
              {"id":"a","dim":2,"faces":[
                {"deg_word":[0],"cell":"nope"},
                {"deg_word":[0],"cell":"v"},
                {"deg_word":[0],"cell":"v"}]}]})"),
      parse_error);
  CHECK_THROWS_AS(builtin_sset("sphere4_min"), parse_error);
}
