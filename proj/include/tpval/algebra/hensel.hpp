#pragma once

#include <vector>

#include "tpval/algebra/finite_field.hpp"
#include "tpval/algebra/rational_poly.hpp"

namespace tpval {

namespace zmod {

inline Integer sym(const Integer& c, const Integer& m) {
  Integer r = pmod(c, m);
  if (2 * r > m) r -= m;
  return r;
}

inline ZPoly reduce(const ZPoly& a, const Integer& m) {
  ZPoly r;
  for (const auto& c : a) r.push_back(pmod(c, m));
  trim(r);
  return r;
}

inline ZPoly sym_reduce(const ZPoly& a, const Integer& m) {
  ZPoly r;
  for (const auto& c : a) r.push_back(sym(c, m));
  trim(r);
  return r;
}

inline ZPoly add(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()), Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

inline ZPoly sub(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()), Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

inline ZPoly mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline ZPoly scale(const ZPoly& a, const Integer& c) {
  ZPoly r;
  for (const auto& x : a) r.push_back(x * c);
  trim(r);
  return r;
}

/// Remainder of a modulo a monic integer polynomial b (exact over Z).
inline ZPoly rem_monic(ZPoly a, const ZPoly& b) {
  trim(a);
  if (b.empty() || b.back() != 1) throw PreconditionError("rem_monic: divisor not monic");
  while (a.size() >= b.size()) {
    std::size_t d = a.size() - b.size();
    Integer c = a.back();
    for (std::size_t j = 0; j < b.size(); ++j) a[d + j] -= c * b[j];
    a.pop_back();
    trim(a);
  }
  return a;
}

inline ZPoly from_fp(const FpPoly& a) {
  ZPoly r;
  for (auto c : a) r.emplace_back(static_cast<long>(c));
  return r;
}

}  // namespace zmod

/// Lifts f = lc(f) * prod(factors) mod p to a factorization mod p^k. The
/// given factors must be monic, pairwise coprime mod p, and lc(f) must be a
/// unit mod p. Returns lifted factors (monic mod p^k, the first absorbing
/// nothing: all returned factors are monic), reduced into [0, p^k).
inline std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<FpPoly>& factors, std::int64_t p, long k) {
  PrimeField fp(p);
  Integer P(static_cast<long>(p));
  Integer M = ipow(P, static_cast<unsigned long>(k));
  if (factors.size() == 1) {
    // f / lc(f) mod p^k.
    Integer inv;
    Integer lc = f.back();
    mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), M.get_mpz_t());
    return {zmod::reduce(zmod::scale(f, inv), M)};
  }
  std::size_t half = factors.size() / 2;
  std::vector<FpPoly> left(factors.begin(), factors.begin() + static_cast<long>(half));
  std::vector<FpPoly> right(factors.begin() + static_cast<long>(half), factors.end());
  FpPoly gbar{1}, hbar{1};
  for (auto& u : left) gbar = poly::mul(fp, gbar, u);
  for (auto& u : right) hbar = poly::mul(fp, hbar, u);
  auto [one, s, t] = poly::ext_gcd(fp, gbar, hbar);
  if (poly::degree<PrimeField>(one) != 0) throw InvariantViolation("Hensel factors not coprime");
  // g carries the leading coefficient of f, h is monic.
  ZPoly g = zmod::scale(zmod::from_fp(gbar), f.back());
  g = zmod::reduce(g, P);
  g.back() = f.back();
  ZPoly h = zmod::from_fp(hbar);
  Integer pj = P;
  for (long j = 1; j < k; ++j) {
    ZPoly e = zmod::sub(f, zmod::mul(g, h));
    for (auto& c : e) {
      if (!mpz_divisible_p(c.get_mpz_t(), pj.get_mpz_t())) throw InvariantViolation("Hensel step not exact");
      c /= pj;
    }
    FpPoly ebar = reduce_mod_p(fp, e);
    auto [q, r] = poly::divmod(fp, poly::mul(fp, s, ebar), hbar);
    FpPoly dg = poly::add(fp, poly::mul(fp, t, ebar), poly::mul(fp, q, gbar));
    g = zmod::add(g, zmod::scale(zmod::from_fp(dg), pj));
    h = zmod::add(h, zmod::scale(zmod::from_fp(r), pj));
    pj *= P;
  }
  g = zmod::reduce(g, M);
  h = zmod::reduce(h, M);
  auto gl = hensel_lift(g, left, p, k);
  auto hl = hensel_lift(h, right, p, k);
  gl.insert(gl.end(), hl.begin(), hl.end());
  return gl;
}

}  // namespace tpval
