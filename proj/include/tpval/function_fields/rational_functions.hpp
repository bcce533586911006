#pragma once

#include <sstream>
#include <string>
#include <type_traits>

#include "tpval/algebra/extensions.hpp"
#include "tpval/algebra/finite_field.hpp"

namespace tpval {

/// k(t) over a constant field context k. Elements are reduced fractions with
/// a monic denominator, so structural equality is field equality.
template <FieldContext C>
class RationalFunctionField {
 public:
  struct Elem {
    Poly<C> num, den;
    friend bool operator==(const Elem&, const Elem&) = default;
  };

  explicit RationalFunctionField(C k) : k_(std::move(k)) {}

  const C& constants() const { return k_; }

  Elem make(Poly<C> num, Poly<C> den) const {
    poly::trim(k_, num);
    poly::trim(k_, den);
    if (den.empty()) throw PreconditionError("rational function with zero denominator");
    if (num.empty()) return zero();
    auto g = poly::gcd(k_, num, den);
    if (g.size() > 1) {
      num = poly::div_exact(k_, num, g);
      den = poly::div_exact(k_, den, g);
    }
    auto li = k_.inv(den.back());
    return {poly::scale(k_, num, li), poly::scale(k_, den, li)};
  }
  Elem from_poly(Poly<C> p) const { return make(std::move(p), {k_.one()}); }
  Elem constant(const typename C::Elem& c) const { return from_poly(poly::constant(k_, c)); }
  Elem variable() const { return from_poly({k_.zero(), k_.one()}); }

  Elem zero() const { return {{}, {k_.one()}}; }
  Elem one() const { return constant(k_.one()); }
  Elem from_int(long n) const { return constant(k_.from_int(n)); }
  Elem add(const Elem& a, const Elem& b) const {
    if (a.den == b.den) return make(poly::add(k_, a.num, b.num), a.den);
    return make(poly::add(k_, poly::mul(k_, a.num, b.den), poly::mul(k_, b.num, a.den)), poly::mul(k_, a.den, b.den));
  }
  Elem neg(const Elem& a) const { return {poly::neg(k_, a.num), a.den}; }
  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
  Elem mul(const Elem& a, const Elem& b) const {
    return make(poly::mul(k_, a.num, b.num), poly::mul(k_, a.den, b.den));
  }
  Elem inv(const Elem& a) const {
    if (a.num.empty()) throw PreconditionError("division by zero in a rational function field");
    return make(a.den, a.num);
  }
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
  bool is_zero(const Elem& a) const { return a.num.empty(); }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }

  bool operator==(const RationalFunctionField& o) const { return k_ == o.k_; }

 private:
  C k_;
};

using FunctionField = RationalFunctionField<NumberField>;
using FFElem = FunctionField::Elem;
using ResidueFunctionField = RationalFunctionField<GaloisField>;

/// Multiplicity of the irreducible g in the nonzero polynomial a.
template <FieldContext C>
int multiplicity(const C& k, Poly<C> a, const Poly<C>& g) {
  int m = 0;
  while (true) {
    auto [q, r] = poly::divmod(k, a, g);
    if (!r.empty()) return m;
    a = std::move(q);
    ++m;
  }
}

namespace detail {

inline std::string format_constant(const NumberField& k, const QPoly& c, bool& simple) {
  simple = c.size() <= 1;
  if (c.empty()) return "0";
  if (simple) return c[0].get_str();
  (void)k;
  return "(" + pretty_qpoly(c, "a") + ")";
}

inline std::string format_constant(const GaloisField& k, const GaloisField::Elem& c, bool& simple) {
  simple = true;
  return k.format(c);
}

template <class C>
std::string format_tpoly(const C& k, const Poly<C>& p, const std::string& var) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = p.size(); i-- > 0;) {
    if (k.is_zero(p[i])) continue;
    bool simple = true;
    bool unit = k.equal(p[i], k.one()), negative = false;
    std::string c = "1";
    if (!unit && k.equal(p[i], k.neg(k.one())) && std::is_same_v<C, NumberField>) {
      unit = negative = true;
    } else if (!unit) {
      c = format_constant(k, p[i], simple);
      negative = simple && c[0] == '-';
      if (negative) c = c.substr(1);
    }
    if (!first) os << (negative ? " - " : " + ");
    else if (negative) os << "-";
    if (i == 0 || !unit) os << c << (i > 0 ? "*" : "");
    if (i > 0) os << var;
    if (i > 1) os << "^" << i;
    first = false;
  }
  return os.str();
}

}  // namespace detail

/// "(t^2 - 2)/(t + 1)" style rendering; constants of a proper number field
/// are written in the generator a.
template <FieldContext C>
std::string format_rational_function(const RationalFunctionField<C>& f, const typename RationalFunctionField<C>::Elem& x,
                                     const std::string& var = "t") {
  std::string n = detail::format_tpoly(f.constants(), x.num, var);
  if (x.den.size() == 1) return n;
  return "(" + n + ")/(" + detail::format_tpoly(f.constants(), x.den, var) + ")";
}

}  // namespace tpval
