#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace cotangent {

// Raised when an input file or flag value is malformed. CLI maps this to
// exit code 2.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a mathematical invariant fails (d^2 != 0, non-invertible
// transport, flatness violation, ...). CLI maps this to exit code 3.
struct invariant_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An exact scalar: either a residue mod p stored canonically in [0, p), or an
// arbitrary-precision rational. Scalars do not know their field; all
// arithmetic is mediated by Field, which keeps the representation canonical
// so that operator== is meaningful.
class Scalar {
 public:
  Scalar() : v_(std::int64_t{0}) {}
  explicit Scalar(std::int64_t residue) : v_(residue) {}
  explicit Scalar(mpq_class q) : v_(std::move(q)) {}

  bool is_residue() const { return std::holds_alternative<std::int64_t>(v_); }
  std::int64_t residue() const { return std::get<std::int64_t>(v_); }
  const mpq_class& rational() const { return std::get<mpq_class>(v_); }

  // Compare by numeric value; an int64-held scalar equals the rational with
  // the same value, so default-initialized zeros compare equal to exact ones.
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  // Total order by value, usable as a container key.
  bool operator<(const Scalar& o) const;

 private:
  std::variant<std::int64_t, mpq_class> v_;
};

// A coefficient field: F_p for a prime p <= 2^31, or Q with exact
// arbitrary-precision arithmetic.
class Field {
 public:
  static Field prime(std::int64_t p);
  static Field rationals();
  // Accepts "Q" or "F<p>", e.g. "F7".
  static Field from_name(const std::string& name);

  bool is_prime_field() const { return p_ != 0; }
  std::int64_t characteristic() const { return p_; }
  std::string name() const;

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(std::int64_t n) const;
  Scalar from_fraction(std::int64_t num, std::int64_t den) const;

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  Scalar inv(const Scalar& a) const;
  Scalar div(const Scalar& a, const Scalar& b) const;

  bool is_zero(const Scalar& a) const;
  bool is_one(const Scalar& a) const;

  // Canonical text form: residues as "k", rationals as "n" or "n/d".
  std::string to_string(const Scalar& a) const;
  // Parses "k", "-k" or "n/d".
  Scalar parse(const std::string& text) const;

  bool operator==(const Field& o) const { return p_ == o.p_; }
  bool operator!=(const Field& o) const { return p_ != o.p_; }

 private:
  explicit Field(std::int64_t p) : p_(p) {}
  std::int64_t p_ = 0;  // 0 means Q
};

}  // namespace cotangent
