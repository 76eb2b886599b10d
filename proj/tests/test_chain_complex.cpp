#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cotangent/chain_complex.hpp>
#include <cotangent/field.hpp>
#include <cotangent/matrix.hpp>

using namespace cotangent;

namespace {

// Simplicial cochain complex of a triangle boundary (three vertices,
// three edges), built by hand.
ChainComplex circle_cochains(const Field& f) {
  ChainComplex c(f);
  c.set_dim(0, 3);
  c.set_dim(1, 3);
  Matrix d0(3, 3);
  // Rows: edges {01}, {02}, {12}; columns: vertices 0, 1, 2.
  long entries[3][3] = {{-1, 1, 0}, {-1, 0, 1}, {0, -1, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d0.at(i, j) = f.from_int(entries[i][j]);
  c.set_diff(0, d0);
  c.require_valid("circle cochain complex");
  return c;
}

ChainComplex two_step(const Field& f, long entry) {
  // K --entry--> K in degrees 0, 1.
  ChainComplex c(f);
  c.set_dim(0, 1);
  c.set_dim(1, 1);
  Matrix d(1, 1);
  d.at(0, 0) = f.from_int(entry);
  c.set_diff(0, d);
  return c;
}

}  // namespace

TEST_CASE("circle cochain cohomology") {
  for (const Field& f : {Field::rationals(), Field::prime(2), Field::prime(7)}) {
    ChainComplex c = circle_cochains(f);
    GradedDims h = c.cohomology();
    CHECK(h == GradedDims{{0, 1}, {1, 1}});
    CHECK(c.euler_characteristic() == 0);
  }
}

TEST_CASE("d^2 violations are detected") {
  Field q = Field::rationals();
  ChainComplex c(q);
  c.set_dim(0, 1);
  c.set_dim(1, 1);
  c.set_dim(2, 1);
  Matrix one(1, 1);
  one.at(0, 0) = q.one();
  c.set_diff(0, one);
  c.set_diff(1, one);
  auto bad = c.first_dsq_failure();
  REQUIRE(bad.has_value());
  CHECK(*bad == 0);
  CHECK_THROWS_AS(c.require_valid("bad complex"), invariant_error);
}

TEST_CASE("differential shape is validated") {
  Field q = Field::rationals();
  ChainComplex c(q);
  c.set_dim(0, 2);
  c.set_dim(1, 1);
  CHECK_THROWS_AS(c.set_diff(0, Matrix::identity(2, q)), invariant_error);
}

TEST_CASE("shift moves degrees and flips differential sign") {
  Field q = Field::rationals();
  ChainComplex c = circle_cochains(q);
  ChainComplex s = shift(c, 1);
  CHECK(s.cohomology() == GradedDims{{-1, 1}, {0, 1}});
  // Odd shift negates the differential.
  CHECK(s.diff(-1) == mat_neg(q, c.diff(0)));
  ChainComplex s2 = shift(c, 2);
  CHECK(s2.diff(-2) == c.diff(0));
  CHECK(shift(s, -1).cohomology() == c.cohomology());
}

TEST_CASE("cone of the identity is acyclic") {
  for (const Field& f : {Field::rationals(), Field::prime(3)}) {
    ChainComplex c = circle_cochains(f);
    std::map<int, Matrix> id;
    for (int n : c.degrees()) id.emplace(n, Matrix::identity(c.dim(n), f));
    REQUIRE(is_chain_map(c, c, id));
    ChainComplex cn = cone(c, c, id);
    cn.require_valid("cone");
    CHECK(cn.cohomology().empty());
  }
}

TEST_CASE("cone of the zero map is a shifted direct sum") {
  Field q = Field::rationals();
  ChainComplex a = two_step(q, 0);  // H^0 = H^1 = K
  ChainComplex b = circle_cochains(q);
  std::map<int, Matrix> zero;
  ChainComplex cn = cone(a, b, zero);
  cn.require_valid("cone of zero map");
  // H(cone) = H(A[1]) + H(B): degrees -1,0 from A[1], degrees 0,1 from B.
  CHECK(cn.cohomology() == GradedDims{{-1, 1}, {0, 2}, {1, 1}});
}

TEST_CASE("direct sum adds cohomology") {
  Field f2 = Field::prime(2);
  ChainComplex a = circle_cochains(f2);
  ChainComplex b = two_step(f2, 1);  // acyclic
  ChainComplex s = direct_sum(a, b);
  s.require_valid("direct sum");
  CHECK(s.cohomology() == a.cohomology());
  CHECK(s.dim(0) == 4);
  CHECK(s.dim(1) == 4);
}

TEST_CASE("dual complex has mirrored cohomology") {
  Field q = Field::rationals();
  ChainComplex c = circle_cochains(q);
  ChainComplex d = dualize(c);
  d.require_valid("dual");
  CHECK(d.cohomology() == GradedDims{{-1, 1}, {0, 1}});
  // Double dual recovers the original cohomology.
  CHECK(dualize(d).cohomology() == c.cohomology());
}

TEST_CASE("tensor product satisfies the Kunneth formula") {
  Field q = Field::rationals();
  ChainComplex c = circle_cochains(q);
  ChainComplex t = tensor(c, c);
  t.require_valid("tensor square");
  CHECK(t.cohomology() == GradedDims{{0, 1}, {1, 2}, {2, 1}});
  CHECK(t.dim(1) == 18);  // 3*3 + 3*3 mixed-degree pairs

  ChainComplex acyclic = two_step(q, 1);
  ChainComplex ta = tensor(c, acyclic);
  ta.require_valid("tensor with acyclic");
  CHECK(ta.cohomology().empty());
}

TEST_CASE("tensor differential uses the Koszul sign") {
  // For factors concentrated in odd degrees the sign matters for d^2 = 0;
  // exercise both parities with shifted copies.
  Field q = Field::rationals();
  ChainComplex c = two_step(q, 1);
  for (int k : {-1, 0, 1, 2}) {
    ChainComplex t = tensor(shift(c, k), c);
    CHECK(!t.first_dsq_failure().has_value());
  }
}

TEST_CASE("cocycle and coboundary bases have the right sizes") {
  Field q = Field::rationals();
  ChainComplex c = circle_cochains(q);
  CHECK(c.cocycle_basis(0).cols() == 1);
  CHECK(c.cocycle_basis(1).cols() == 3);
  CHECK(c.coboundary_basis(1).cols() == 2);
  CHECK(c.coboundary_basis(0).cols() == 0);
  // Coboundaries really are hit by d: each column solvable.
  Matrix b = c.coboundary_basis(1);
  for (std::size_t j = 0; j < b.cols(); ++j)
    CHECK(solve(q, c.diff(0), column_of(b, j)).has_value());
}

TEST_CASE("is_chain_map rejects non-commuting squares") {
  Field q = Field::rationals();
  ChainComplex a = two_step(q, 1);
  ChainComplex b = two_step(q, 0);
  std::map<int, Matrix> only_top;
  only_top.emplace(1, Matrix::identity(1, q));
  CHECK(!is_chain_map(a, b, only_top));
}
