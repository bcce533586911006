#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "tpval/algebra/integer.hpp"
#include "tpval/algebra/polynomial.hpp"

namespace tpval {

struct RationalField {
  using Elem = Rational;
  Rational zero() const { return 0; }
  Rational one() const { return 1; }
  Rational from_int(long n) const { return n; }
  Rational add(const Rational& a, const Rational& b) const { return a + b; }
  Rational sub(const Rational& a, const Rational& b) const { return a - b; }
  Rational mul(const Rational& a, const Rational& b) const { return a * b; }
  Rational neg(const Rational& a) const { return -a; }
  Rational inv(const Rational& a) const {
    if (a == 0) throw PreconditionError("division by zero");
    return 1 / a;
  }
  bool is_zero(const Rational& a) const { return a == 0; }
  bool equal(const Rational& a, const Rational& b) const { return a == b; }
};

inline const RationalField QQ{};

using QPoly = Poly<RationalField>;
using ZPoly = std::vector<Integer>;

inline QPoly qpoly(std::initializer_list<long> coeffs) {
  QPoly r;
  for (long c : coeffs) r.emplace_back(c);
  poly::trim(QQ, r);
  return r;
}

inline QPoly to_qpoly(const ZPoly& z) {
  QPoly r(z.begin(), z.end());
  poly::trim(QQ, r);
  return r;
}

inline void trim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

/// Scales a rational polynomial to a primitive integer polynomial with
/// positive leading coefficient; returns the scalar c with f = c * result.
inline std::pair<ZPoly, Rational> primitive_part(const QPoly& f) {
  if (f.empty()) return {{}, Rational(0)};
  Integer den = 1;
  for (const auto& c : f) den = lcm(den, c.get_den());
  ZPoly z;
  for (const auto& c : f) z.push_back(Integer(c * den));
  Integer g = 0;
  for (const auto& c : z) g = gcd(g, c);
  if (z.back() < 0) g = -g;
  for (auto& c : z) c /= g;
  return {z, make_rational(g, den)};
}

inline Integer content(const ZPoly& z) {
  Integer g = 0;
  for (const auto& c : z) g = gcd(g, c);
  return g;
}

inline bool is_integral(const QPoly& f) {
  for (const auto& c : f)
    if (c.get_den() != 1) return false;
  return true;
}

/// Resultant over Q via the Euclidean remainder sequence.
inline Rational resultant(QPoly a, QPoly b) {
  poly::trim(QQ, a);
  poly::trim(QQ, b);
  if (a.empty() || b.empty()) return 0;
  Rational acc = 1;
  while (true) {
    int da = poly::degree<RationalField>(a), db = poly::degree<RationalField>(b);
    if (db == 0) {
      Rational p = 1;
      for (int i = 0; i < da; ++i) p *= b[0];
      return acc * p;
    }
    if (da == 0) {
      Rational p = 1;
      for (int i = 0; i < db; ++i) p *= a[0];
      return acc * p;
    }
    if (da < db) {
      if ((da * db) % 2 == 1) acc = -acc;
      std::swap(a, b);
      continue;
    }
    auto r = poly::mod(QQ, a, b);
    if (r.empty()) return 0;
    int dr = poly::degree<RationalField>(r);
    if ((da * db) % 2 == 1) acc = -acc;
    Rational lb = b.back();
    for (int i = 0; i < da - dr; ++i) acc *= lb;
    a = std::move(b);
    b = std::move(r);
  }
}

inline Rational discriminant(const QPoly& f) {
  int n = poly::degree<RationalField>(f);
  Rational r = resultant(f, poly::derivative(QQ, f)) / f.back();
  if ((n * (n - 1) / 2) % 2 == 1) r = -r;
  return r;
}

/// Polynomial through the points (xs[i], ys[i]) (Newton form).
inline QPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  std::size_t n = xs.size();
  std::vector<Rational> c = ys;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) {
      c[i] = (c[i] - c[i - 1]) / (xs[i] - xs[i - j]);
      if (i == j) break;
    }
  QPoly r;
  for (std::size_t i = n; i-- > 0;) {
    r = poly::mul(QQ, r, poly::x_minus(QQ, xs[i]));
    r = poly::add(QQ, r, poly::constant(QQ, c[i]));
  }
  return r;
}

inline std::string format_qpoly(const QPoly& f) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i].get_str();
  if (f.empty()) os << "0";
  os << "]";
  return os.str();
}

/// Human-readable x^2 + 1 style rendering.
inline std::string pretty_qpoly(const QPoly& f, const std::string& var = "x") {
  if (f.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = f.size(); i-- > 0;) {
    const Rational& c = f[i];
    if (c == 0) continue;
    Rational a = abs(c);
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    if (i == 0 || a != 1) os << a.get_str();
    if (i > 0) os << var;
    if (i > 1) os << "^" << i;
    first = false;
  }
  return os.str();
}

}  // namespace tpval
