#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cotangent/field.hpp>
#include <cotangent/matrix.hpp>

#include <random>

using namespace cotangent;

namespace {

Matrix from_ints(const Field& f, std::size_t rows, std::size_t cols,
                 std::initializer_list<long> entries) {
  REQUIRE(entries.size() == rows * cols);
  Matrix m(rows, cols);
  auto it = entries.begin();
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = f.from_int(*it++);
  return m;
}

Matrix random_matrix(const Field& f, std::size_t rows, std::size_t cols,
                     std::mt19937& rng) {
  std::uniform_int_distribution<long> dist(-9, 9);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = f.from_int(dist(rng));
  return m;
}

}  // namespace

TEST_CASE("prime field arithmetic") {
  Field f7 = Field::prime(7);
  CHECK(f7.characteristic() == 7);
  CHECK(f7.name() == "F7");
  CHECK(f7.is_prime_field());
  Scalar three = f7.from_int(3);
  Scalar five = f7.from_int(-2);
  CHECK(f7.to_string(five) == "5");
  CHECK(f7.is_one(f7.mul(three, f7.inv(three))));
  CHECK(f7.is_zero(f7.add(three, f7.from_int(4))));
  CHECK(f7.div(f7.one(), f7.from_int(2)) == f7.from_int(4));
  // Every nonzero element is invertible.
  for (long a = 1; a < 7; ++a)
    CHECK(f7.is_one(f7.mul(f7.from_int(a), f7.inv(f7.from_int(a)))));
}

TEST_CASE("prime field constructor validates input") {
  CHECK_THROWS_AS(Field::prime(1), parse_error);
  CHECK_THROWS_AS(Field::prime(6), parse_error);
  CHECK_THROWS_AS(Field::prime((1LL << 31) + 11), parse_error);
  CHECK_NOTHROW(Field::prime(2));
  CHECK_NOTHROW(Field::prime(2147483647));  // 2^31 - 1 is prime
}

TEST_CASE("field parsing from names") {
  CHECK(Field::from_name("Q").characteristic() == 0);
  CHECK(Field::from_name("F2").characteristic() == 2);
  CHECK(Field::from_name("F101").characteristic() == 101);
  CHECK_THROWS_AS(Field::from_name("F4"), parse_error);
  CHECK_THROWS_AS(Field::from_name("R"), parse_error);
  CHECK_THROWS_AS(Field::from_name("F"), parse_error);
}

TEST_CASE("rational arithmetic") {
  Field q = Field::rationals();
  CHECK(q.characteristic() == 0);
  CHECK(q.name() == "Q");
  Scalar half = q.from_fraction(1, 2);
  Scalar third = q.from_fraction(1, 3);
  CHECK(q.to_string(q.add(half, third)) == "5/6");
  CHECK(q.to_string(q.mul(half, third)) == "1/6");
  CHECK(q.to_string(q.sub(half, half)) == "0");
  CHECK(q.inv(half) == q.from_int(2));
  CHECK_THROWS_AS(q.inv(q.zero()), invariant_error);
}

TEST_CASE("default-initialized scalars behave as exact zeros") {
  Field q = Field::rationals();
  Scalar raw;  // int64 representation
  CHECK(q.is_zero(raw));
  CHECK(raw == q.zero());
  CHECK(q.add(raw, q.from_fraction(2, 3)) == q.from_fraction(2, 3));
  CHECK(!(raw < q.zero()));
  CHECK(!(q.zero() < raw));
}

TEST_CASE("scalar parsing round trips") {
  Field q = Field::rationals();
  for (const char* text : {"0", "1", "-1", "7/3", "-22/7"}) {
    CHECK(q.to_string(q.parse(text)) == text);
  }
  Field f5 = Field::prime(5);
  CHECK(f5.to_string(f5.parse("7")) == "2");
  CHECK(f5.to_string(f5.parse("1/2")) == "3");  // 2 * 3 = 6 = 1 mod 5
  CHECK_THROWS_AS(f5.parse("1/5"), parse_error);
  CHECK_THROWS_AS(q.parse("x"), parse_error);
}

TEST_CASE("rank of identity over F7") {
  Field f7 = Field::prime(7);
  CHECK(rank(f7, Matrix::identity(2, f7)) == 2);
}

TEST_CASE("rank of a singular matrix over Q") {
  Field q = Field::rationals();
  Matrix m = from_ints(q, 2, 2, {1, 2, 2, 4});
  CHECK(rank(q, m) == 1);
  Matrix ker = kernel_basis(q, m);
  REQUIRE(ker.cols() == 1);
  CHECK(is_zero_matrix(q, mat_mul(q, m, ker)));
}

TEST_CASE("solve upper triangular system over F2") {
  Field f2 = Field::prime(2);
  Matrix a = from_ints(f2, 2, 2, {1, 1, 0, 1});
  std::vector<Scalar> b = {f2.one(), f2.one()};
  auto x = solve(f2, a, b);
  REQUIRE(x.has_value());
  CHECK(f2.is_zero((*x)[0]));
  CHECK(f2.is_one((*x)[1]));
}

TEST_CASE("solve reports inconsistency") {
  Field q = Field::rationals();
  Matrix a = from_ints(q, 2, 1, {1, 2});
  std::vector<Scalar> b = {q.one(), q.one()};
  CHECK(!solve(q, a, b).has_value());
}

TEST_CASE("rank-nullity on random matrices") {
  std::mt19937 rng(20240811);
  for (const Field& f : {Field::rationals(), Field::prime(2), Field::prime(97)}) {
    for (int trial = 0; trial < 10; ++trial) {
      std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
      Matrix m = random_matrix(f, rows, cols, rng);
      std::size_t r = rank(f, m);
      Matrix ker = kernel_basis(f, m);
      CHECK(r + ker.cols() == cols);
      CHECK(is_zero_matrix(f, mat_mul(f, m, ker)));
      CHECK(rank(f, ker) == ker.cols());
    }
  }
}

TEST_CASE("rref is idempotent and preserves rank") {
  std::mt19937 rng(7);
  Field f5 = Field::prime(5);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix m = random_matrix(f5, 4, 5, rng);
    Rref first = rref(f5, m);
    Rref second = rref(f5, first.r);
    CHECK(first.r == second.r);
    CHECK(first.pivot_cols == second.pivot_cols);
    CHECK(rank(f5, m) == first.pivot_cols.size());
  }
}

TEST_CASE("inverse and determinant") {
  Field q = Field::rationals();
  Matrix m = from_ints(q, 2, 2, {2, 1, 1, 1});
  CHECK(q.to_string(determinant(q, m)) == "1");
  auto inv = inverse(q, m);
  REQUIRE(inv.has_value());
  CHECK(mat_mul(q, m, *inv) == Matrix::identity(2, q));
  CHECK(mat_mul(q, *inv, m) == Matrix::identity(2, q));

  Matrix sing = from_ints(q, 2, 2, {1, 2, 2, 4});
  CHECK(!inverse(q, sing).has_value());
  CHECK(q.is_zero(determinant(q, sing)));

  // Determinant picks up row-swap signs: [[0,1],[1,0]] has det -1.
  Matrix swap = from_ints(q, 2, 2, {0, 1, 1, 0});
  CHECK(determinant(q, swap) == q.from_int(-1));
}

TEST_CASE("matrix product against hand computation") {
  Field q = Field::rationals();
  Matrix a = from_ints(q, 2, 3, {1, 2, 3, 4, 5, 6});
  Matrix b = from_ints(q, 3, 2, {7, 8, 9, 10, 11, 12});
  Matrix expected = from_ints(q, 2, 2, {58, 64, 139, 154});
  CHECK(mat_mul(q, a, b) == expected);
  CHECK(transpose(mat_mul(q, a, b)) == mat_mul(q, transpose(b), transpose(a)));
}

TEST_CASE("solve_matrix solves all columns at once") {
  Field f3 = Field::prime(3);
  std::mt19937 rng(99);
  Matrix a = from_ints(f3, 3, 3, {1, 0, 1, 0, 1, 2, 1, 1, 1});
  REQUIRE(rank(f3, a) == 3);
  Matrix b = random_matrix(f3, 3, 2, rng);
  auto x = solve_matrix(f3, a, b);
  REQUIRE(x.has_value());
  CHECK(mat_mul(f3, a, *x) == b);
}

TEST_CASE("hstack and column extraction") {
  Field q = Field::rationals();
  Matrix a = from_ints(q, 2, 1, {1, 2});
  Matrix b = from_ints(q, 2, 2, {3, 4, 5, 6});
  Matrix c = hstack(a, b);
  CHECK(c.cols() == 3);
  CHECK(column_of(c, 0) == column_of(a, 0));
  CHECK(column_of(c, 2) == column_of(b, 1));
  Matrix rebuilt = mat_from_columns({column_of(c, 0), column_of(c, 1), column_of(c, 2)}, 2);
  CHECK(rebuilt == c);
}
