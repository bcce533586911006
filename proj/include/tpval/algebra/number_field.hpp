#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "tpval/algebra/factor_q.hpp"
#include "tpval/algebra/linalg.hpp"

namespace tpval {

/// Q(a) = Q[x]/(minpoly). Cheap to copy; two fields are equal iff their
/// defining polynomials are.
class NumberField {
 public:
  using Elem = QPoly;

  NumberField() : NumberField(QPoly{Rational(0), Rational(1)}, "Q", true) {}

  /// Verifies that minpoly is monic and irreducible over Q.
  NumberField(QPoly minpoly, std::string label) : NumberField(std::move(minpoly), std::move(label), false) {}

  static NumberField rationals() { return NumberField(); }

  const QPoly& minpoly() const { return d_->minpoly; }
  int degree() const { return static_cast<int>(d_->minpoly.size()) - 1; }
  const std::string& label() const { return d_->label; }
  bool is_rationals() const { return degree() == 1; }

  // FieldContext interface; elements are reduced representatives.
  Elem zero() const { return {}; }
  Elem one() const { return {Rational(1)}; }
  Elem from_int(long n) const { return poly::constant(QQ, Rational(n)); }
  Elem from_rational(const Rational& q) const { return poly::constant(QQ, q); }
  Elem add(const Elem& a, const Elem& b) const { return poly::add(QQ, a, b); }
  Elem sub(const Elem& a, const Elem& b) const { return poly::sub(QQ, a, b); }
  Elem neg(const Elem& a) const { return poly::neg(QQ, a); }
  Elem mul(const Elem& a, const Elem& b) const { return reduce(poly::mul(QQ, a, b)); }
  Elem inv(const Elem& a) const {
    if (a.empty()) throw PreconditionError("division by zero in " + label());
    auto [g, s, t] = poly::ext_gcd(QQ, a, minpoly());
    return reduce(s);
  }
  bool is_zero(const Elem& a) const { return a.empty(); }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }

  Elem reduce(const QPoly& a) const { return poly::mod(QQ, a, minpoly()); }
  Elem generator() const { return reduce(QPoly{Rational(0), Rational(1)}); }
  Elem pow(const Elem& a, unsigned e) const {
    Elem r = one();
    for (unsigned i = 0; i < e; ++i) r = mul(r, a);
    return r;
  }

  /// Norm to Q.
  Rational norm(const Elem& a) const { return resultant(minpoly(), a); }

  /// Characteristic polynomial of multiplication by a, over Q.
  QPoly charpoly(const Elem& a) const {
    int n = degree();
    std::vector<Rational> xs, ys;
    for (int i = 0; i <= n; ++i) {
      xs.emplace_back(i);
      ys.push_back(resultant(minpoly(), poly::sub(QQ, poly::constant(QQ, Rational(i)), a)));
    }
    return interpolate(xs, ys);
  }

  QPoly minimal_polynomial(const Elem& a) const { return poly::squarefree_part_char0(QQ, charpoly(a)); }

  /// Smallest positive integer d with d*a integral, from the coefficients.
  Integer integral_scale() const {
    Integer d = 1;
    for (const auto& c : minpoly()) d = lcm(d, c.get_den());
    return d;
  }

  std::string format(const Elem& a) const { return format_qpoly(a); }

  bool operator==(const NumberField& o) const { return d_ == o.d_ || minpoly() == o.minpoly(); }
  bool operator!=(const NumberField& o) const { return !(*this == o); }

 private:
  struct Data {
    QPoly minpoly;
    std::string label;
  };

  NumberField(QPoly minpoly, std::string label, bool trusted) {
    poly::trim(QQ, minpoly);
    if (!trusted) {
      if (minpoly.size() < 2) throw PreconditionError("number field: minpoly must have positive degree");
      if (minpoly.back() != 1) throw PreconditionError("number field: minpoly must be monic");
      if (!is_irreducible_over_Q(minpoly))
        throw PreconditionError("number field: minpoly " + pretty_qpoly(minpoly) + " is reducible over Q");
    }
    d_ = std::make_shared<const Data>(Data{std::move(minpoly), std::move(label)});
  }

  std::shared_ptr<const Data> d_;
};

/// An element together with the field it lives in.
struct FieldElement {
  NumberField field;
  QPoly repr;

  FieldElement() = default;
  FieldElement(NumberField k, QPoly r) : field(std::move(k)), repr(field.reduce(r)) {}

  static FieldElement rational(const NumberField& k, const Rational& q) { return {k, k.from_rational(q)}; }

  bool is_zero() const { return repr.empty(); }
  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    return {a.field, a.field.add(a.repr, b.repr)};
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    return {a.field, a.field.sub(a.repr, b.repr)};
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    return {a.field, a.field.mul(a.repr, b.repr)};
  }
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    return {a.field, a.field.mul(a.repr, a.field.inv(b.repr))};
  }
  FieldElement operator-() const { return {field, field.neg(repr)}; }
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field == b.field && a.repr == b.repr;
  }
};

using KPoly = Poly<NumberField>;

inline KPoly to_kpoly(const NumberField& k, const QPoly& f) {
  KPoly r;
  for (const auto& c : f) r.push_back(k.from_rational(c));
  poly::trim(k, r);
  return r;
}

inline bool qpoly_less(const QPoly& a, const QPoly& b) { return detail::qpoly_less(a, b); }

/// Elementwise order used for canonical sorting of field elements.
inline bool element_less(const QPoly& a, const QPoly& b) {
  std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    Rational x = i < a.size() ? a[i] : Rational(0);
    Rational y = i < b.size() ? b[i] : Rational(0);
    if (x != y) return x < y;
  }
  return false;
}

inline bool kpoly_less(const KPoly& a, const KPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = a.size(); i-- > 0;) {
    if (element_less(a[i], b[i])) return true;
    if (element_less(b[i], a[i])) return false;
  }
  return false;
}

}  // namespace tpval
