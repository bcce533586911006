#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <string>

#include "tpval/errors.hpp"

namespace tpval {

using Integer = mpz_class;
// Always canonical: gmp keeps mpq_class reduced with a positive denominator
// as long as every constructor path goes through canonicalize().
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den = 1) {
  if (den == 0) throw PreconditionError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational parse_rational(const std::string& text) {
  Rational r;
  if (text.empty() || r.set_str(text, 10) != 0) throw ParseError("malformed rational '" + text + "'");
  if (r.get_den() == 0) throw ParseError("zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

inline std::string to_string(const Integer& z) { return z.get_str(); }
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// p-adic valuation of a nonzero integer.
inline long vp(const Integer& z, unsigned long p) {
  if (z == 0) return std::numeric_limits<long>::max();
  Integer t = abs(z);
  long v = 0;
  while (mpz_divisible_ui_p(t.get_mpz_t(), p)) {
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), p);
    ++v;
  }
  return v;
}

inline long vp(const Rational& q, unsigned long p) {
  if (q == 0) return std::numeric_limits<long>::max();
  return vp(Integer(q.get_num()), p) - vp(Integer(q.get_den()), p);
}

inline Integer ipow(const Integer& b, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline Integer pmod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

/// Reduces a p-integral rational into [0, m) where m is a power of p.
inline Integer rational_mod(const Rational& q, const Integer& m) {
  Integer den = q.get_den();
  Integer inv;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0)
    throw InvariantViolation("rational not integral at the working prime");
  return pmod(Integer(q.get_num()) * inv, m);
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline bool is_prime(const Integer& n) { return n > 1 && mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

inline bool is_prime(std::int64_t n) { return is_prime(Integer(static_cast<long>(n))); }

inline std::int64_t mod_inverse(std::int64_t a, std::int64_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = ((a % p) + p) % p;
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw InvariantViolation("element not invertible modulo " + std::to_string(p));
  return t < 0 ? t + p : t;
}

}  // namespace tpval
