#include "cotangent/field.hpp"

namespace cotangent {

namespace {

// A Scalar holding an int64 under Q means the integer value; coerce when
// representations are mixed (default-initialized zeros vs. exact rationals).
mpq_class as_mpq(const Scalar& s) {
  if (s.is_residue()) return mpq_class(static_cast<long>(s.residue()));
  return s.rational();
}

}  // namespace

bool Scalar::operator==(const Scalar& o) const {
  if (is_residue() && o.is_residue()) return residue() == o.residue();
  return cmp(as_mpq(*this), as_mpq(o)) == 0;
}

bool Scalar::operator<(const Scalar& o) const {
  if (is_residue() && o.is_residue()) return residue() < o.residue();
  return cmp(as_mpq(*this), as_mpq(o)) < 0;
}

namespace {

bool is_prime_u63(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::int64_t mod_reduce(std::int64_t n, std::int64_t p) {
  std::int64_t r = n % p;
  return r < 0 ? r + p : r;
}

// Inverse of a mod p via extended Euclid; a in [1, p).
std::int64_t mod_inv(std::int64_t a, std::int64_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = a;
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw invariant_error("element has no inverse mod p");
  return t < 0 ? t + p : t;
}

}  // namespace

Field Field::prime(std::int64_t p) {
  if (p < 2 || p > (std::int64_t{1} << 31))
    throw parse_error("field characteristic out of range (2 <= p <= 2^31)");
  if (!is_prime_u63(p))
    throw parse_error("field characteristic " + std::to_string(p) + " is not prime");
  return Field(p);
}

Field Field::rationals() { return Field(0); }

Field Field::from_name(const std::string& name) {
  if (name == "Q" || name == "q") return rationals();
  if (name.size() >= 2 && (name[0] == 'F' || name[0] == 'f')) {
    try {
      return prime(std::stoll(name.substr(1)));
    } catch (const std::invalid_argument&) {
      throw parse_error("bad field name: " + name);
    } catch (const std::out_of_range&) {
      throw parse_error("bad field name: " + name);
    }
  }
  throw parse_error("bad field name: " + name + " (expected Q or F<p>)");
}

std::string Field::name() const {
  return is_prime_field() ? "F" + std::to_string(p_) : "Q";
}

Scalar Field::zero() const { return from_int(0); }
Scalar Field::one() const { return from_int(1); }

Scalar Field::from_int(std::int64_t n) const {
  if (is_prime_field()) return Scalar(mod_reduce(n, p_));
  return Scalar(mpq_class(n));
}

Scalar Field::from_fraction(std::int64_t num, std::int64_t den) const {
  if (den == 0) throw parse_error("zero denominator");
  if (is_prime_field()) return div(from_int(num), from_int(den));
  mpq_class q(num, den);
  q.canonicalize();
  return Scalar(q);
}

Scalar Field::add(const Scalar& a, const Scalar& b) const {
  if (is_prime_field()) return Scalar(mod_reduce(a.residue() + b.residue(), p_));
  return Scalar(mpq_class(as_mpq(a) + as_mpq(b)));
}

Scalar Field::sub(const Scalar& a, const Scalar& b) const {
  if (is_prime_field()) return Scalar(mod_reduce(a.residue() - b.residue(), p_));
  return Scalar(mpq_class(as_mpq(a) - as_mpq(b)));
}

Scalar Field::mul(const Scalar& a, const Scalar& b) const {
  if (is_prime_field()) return Scalar(mod_reduce(a.residue() * b.residue(), p_));
  return Scalar(mpq_class(as_mpq(a) * as_mpq(b)));
}

Scalar Field::neg(const Scalar& a) const {
  if (is_prime_field()) return Scalar(mod_reduce(-a.residue(), p_));
  return Scalar(mpq_class(-as_mpq(a)));
}

Scalar Field::inv(const Scalar& a) const {
  if (is_zero(a)) throw invariant_error("division by zero");
  if (is_prime_field()) return Scalar(mod_inv(a.residue(), p_));
  return Scalar(mpq_class(1 / as_mpq(a)));
}

Scalar Field::div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }

bool Field::is_zero(const Scalar& a) const {
  if (a.is_residue()) return a.residue() == 0;
  return sgn(a.rational()) == 0;
}

bool Field::is_one(const Scalar& a) const {
  if (a.is_residue()) return a.residue() == 1;
  return cmp(a.rational(), 1) == 0;
}

std::string Field::to_string(const Scalar& a) const {
  if (a.is_residue()) return std::to_string(a.residue());
  return a.rational().get_str();
}

Scalar Field::parse(const std::string& text) const {
  if (text.empty()) throw parse_error("empty scalar");
  try {
    mpq_class q(text);
    q.canonicalize();
    if (is_prime_field()) {
      mpz_class den = q.get_den();
      mpz_class p(static_cast<long>(p_));
      mpz_class dmod = den % p;
      if (dmod == 0) throw parse_error("denominator divisible by p in " + text);
      mpz_class num = q.get_num() % p;
      std::int64_t n = mod_reduce(num.get_si(), p_);
      std::int64_t d = mod_reduce(dmod.get_si(), p_);
      return Scalar(mod_reduce(n * mod_inv(d, p_), p_));
    }
    return Scalar(q);
  } catch (const std::invalid_argument&) {
    throw parse_error("bad scalar: " + text);
  }
}

}  // namespace cotangent
