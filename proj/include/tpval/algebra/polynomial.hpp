#pragma once

#include <concepts>
#include <cstddef>
#include <tuple>
#include <utility>
#include <vector>

#include "tpval/errors.hpp"

namespace tpval {

// A field context supplies the arithmetic for its element type. Contexts
// carry runtime parameters (the prime, the modulus, the defining polynomial)
// so element types can stay plain values.
template <class F>
concept FieldContext = requires(const F& k, const typename F::Elem& a, long n) {
  { k.zero() } -> std::convertible_to<typename F::Elem>;
  { k.one() } -> std::convertible_to<typename F::Elem>;
  { k.from_int(n) } -> std::convertible_to<typename F::Elem>;
  { k.add(a, a) } -> std::convertible_to<typename F::Elem>;
  { k.sub(a, a) } -> std::convertible_to<typename F::Elem>;
  { k.mul(a, a) } -> std::convertible_to<typename F::Elem>;
  { k.neg(a) } -> std::convertible_to<typename F::Elem>;
  { k.inv(a) } -> std::convertible_to<typename F::Elem>;
  { k.is_zero(a) } -> std::convertible_to<bool>;
  { k.equal(a, a) } -> std::convertible_to<bool>;
};

/// Dense univariate polynomial, constant term first. The zero polynomial is
/// the empty vector; no other value has a zero leading coefficient.
template <class F>
using Poly = std::vector<typename F::Elem>;

namespace poly {

template <FieldContext F>
void trim(const F& k, Poly<F>& a) {
  while (!a.empty() && k.is_zero(a.back())) a.pop_back();
}

template <FieldContext F>
int degree(const Poly<F>& a) {
  return static_cast<int>(a.size()) - 1;
}

template <FieldContext F>
Poly<F> constant(const F& k, const typename F::Elem& c) {
  if (k.is_zero(c)) return {};
  return {c};
}

/// x^n
template <FieldContext F>
Poly<F> monomial(const F& k, std::size_t n, const typename F::Elem& c) {
  if (k.is_zero(c)) return {};
  Poly<F> r(n + 1, k.zero());
  r[n] = c;
  return r;
}

template <FieldContext F>
Poly<F> x_minus(const F& k, const typename F::Elem& c) {
  return {k.neg(c), k.one()};
}

template <FieldContext F>
bool equal(const F& k, const Poly<F>& a, const Poly<F>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!k.equal(a[i], b[i])) return false;
  return true;
}

template <FieldContext F>
Poly<F> add(const F& k, const Poly<F>& a, const Poly<F>& b) {
  Poly<F> r(std::max(a.size(), b.size()), k.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = k.add(r[i], b[i]);
  trim(k, r);
  return r;
}

template <FieldContext F>
Poly<F> sub(const F& k, const Poly<F>& a, const Poly<F>& b) {
  Poly<F> r(std::max(a.size(), b.size()), k.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = k.sub(r[i], b[i]);
  trim(k, r);
  return r;
}

template <FieldContext F>
Poly<F> neg(const F& k, const Poly<F>& a) {
  Poly<F> r;
  r.reserve(a.size());
  for (const auto& c : a) r.push_back(k.neg(c));
  return r;
}

template <FieldContext F>
Poly<F> scale(const F& k, const Poly<F>& a, const typename F::Elem& c) {
  if (k.is_zero(c)) return {};
  Poly<F> r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(k.mul(x, c));
  trim(k, r);
  return r;
}

template <FieldContext F>
Poly<F> mul(const F& k, const Poly<F>& a, const Poly<F>& b) {
  if (a.empty() || b.empty()) return {};
  Poly<F> r(a.size() + b.size() - 1, k.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (k.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = k.add(r[i + j], k.mul(a[i], b[j]));
  }
  trim(k, r);
  return r;
}

template <FieldContext F>
Poly<F> shift(const F& k, const Poly<F>& a, std::size_t n) {
  if (a.empty()) return {};
  Poly<F> r(n, k.zero());
  r.insert(r.end(), a.begin(), a.end());
  return r;
}

template <FieldContext F>
const typename F::Elem& lead(const Poly<F>& a) {
  if (a.empty()) throw PreconditionError("leading coefficient of the zero polynomial");
  return a.back();
}

/// Quotient and remainder; b must be nonzero.
template <FieldContext F>
std::pair<Poly<F>, Poly<F>> divmod(const F& k, const Poly<F>& a, const Poly<F>& b) {
  if (b.empty()) throw PreconditionError("polynomial division by zero");
  Poly<F> r = a;
  trim(k, r);
  if (r.size() < b.size()) return {{}, r};
  Poly<F> q(r.size() - b.size() + 1, k.zero());
  auto lc_inv = k.inv(b.back());
  while (!r.empty() && r.size() >= b.size()) {
    std::size_t d = r.size() - b.size();
    auto c = k.mul(r.back(), lc_inv);
    q[d] = c;
    for (std::size_t j = 0; j < b.size(); ++j) r[d + j] = k.sub(r[d + j], k.mul(c, b[j]));
    r.pop_back();
    trim(k, r);
  }
  trim(k, q);
  return {q, r};
}

template <FieldContext F>
Poly<F> mod(const F& k, const Poly<F>& a, const Poly<F>& b) {
  return divmod(k, a, b).second;
}

template <FieldContext F>
Poly<F> div_exact(const F& k, const Poly<F>& a, const Poly<F>& b) {
  auto [q, r] = divmod(k, a, b);
  if (!r.empty()) throw InvariantViolation("inexact polynomial division");
  return q;
}

template <FieldContext F>
bool divides(const F& k, const Poly<F>& b, const Poly<F>& a) {
  return mod(k, a, b).empty();
}

template <FieldContext F>
Poly<F> monic(const F& k, const Poly<F>& a) {
  if (a.empty()) return a;
  return scale(k, a, k.inv(a.back()));
}

/// Monic gcd (zero if both inputs are zero).
template <FieldContext F>
Poly<F> gcd(const F& k, Poly<F> a, Poly<F> b) {
  trim(k, a);
  trim(k, b);
  while (!b.empty()) {
    auto r = mod(k, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(k, a);
}

/// Returns (g, s, t) with s*a + t*b = g, g monic.
template <FieldContext F>
std::tuple<Poly<F>, Poly<F>, Poly<F>> ext_gcd(const F& k, const Poly<F>& a, const Poly<F>& b) {
  Poly<F> r0 = a, r1 = b, s0 = {k.one()}, s1 = {}, t0 = {}, t1 = {k.one()};
  trim(k, r0);
  trim(k, r1);
  while (!r1.empty()) {
    auto [q, r] = divmod(k, r0, r1);
    auto s = sub(k, s0, mul(k, q, s1));
    auto t = sub(k, t0, mul(k, q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
    t0 = std::move(t1);
    t1 = std::move(t);
  }
  if (r0.empty()) return {r0, s0, t0};
  auto li = k.inv(r0.back());
  return {scale(k, r0, li), scale(k, s0, li), scale(k, t0, li)};
}

template <FieldContext F>
Poly<F> derivative(const F& k, const Poly<F>& a) {
  if (a.size() <= 1) return {};
  Poly<F> r(a.size() - 1, k.zero());
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = k.mul(a[i], k.from_int(static_cast<long>(i)));
  trim(k, r);
  return r;
}

template <FieldContext F>
typename F::Elem eval(const F& k, const Poly<F>& a, const typename F::Elem& x) {
  auto acc = k.zero();
  for (std::size_t i = a.size(); i-- > 0;) acc = k.add(k.mul(acc, x), a[i]);
  return acc;
}

/// a(b(x))
template <FieldContext F>
Poly<F> compose(const F& k, const Poly<F>& a, const Poly<F>& b) {
  Poly<F> acc;
  for (std::size_t i = a.size(); i-- > 0;) acc = add(k, mul(k, acc, b), constant(k, a[i]));
  return acc;
}

/// a(b(x)) mod m
template <FieldContext F>
Poly<F> compose_mod(const F& k, const Poly<F>& a, const Poly<F>& b, const Poly<F>& m) {
  Poly<F> acc;
  for (std::size_t i = a.size(); i-- > 0;) acc = mod(k, add(k, mul(k, acc, b), constant(k, a[i])), m);
  return acc;
}

template <FieldContext F, class Exp>
Poly<F> powmod(const F& k, Poly<F> base, Exp e, const Poly<F>& m) {
  Poly<F> result = mod(k, Poly<F>{k.one()}, m);
  base = mod(k, base, m);
  while (e > 0) {
    if (e % 2 == 1) result = mod(k, mul(k, result, base), m);
    e /= 2;
    if (e > 0) base = mod(k, mul(k, base, base), m);
  }
  return result;
}

template <FieldContext F>
Poly<F> pow(const F& k, const Poly<F>& base, unsigned e) {
  Poly<F> r{k.one()};
  for (unsigned i = 0; i < e; ++i) r = mul(k, r, base);
  return r;
}

/// Product of (x - r) over the given roots.
template <FieldContext F>
Poly<F> from_roots(const F& k, const std::vector<typename F::Elem>& roots) {
  Poly<F> r{k.one()};
  for (const auto& c : roots) r = mul(k, r, x_minus(k, c));
  return r;
}

/// Squarefree part for characteristic zero contexts.
template <FieldContext F>
Poly<F> squarefree_part_char0(const F& k, const Poly<F>& a) {
  auto g = gcd(k, a, derivative(k, a));
  return monic(k, div_exact(k, a, g));
}

}  // namespace poly
}  // namespace tpval
