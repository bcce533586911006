#pragma once

#include <algorithm>
#include <vector>

#include "tpval/algebra/hensel.hpp"

namespace tpval {

struct QFactor {
  QPoly factor;  // monic, irreducible over Q
  int multiplicity;
};

namespace detail {

/// Squarefree decomposition in characteristic zero (Yun).
inline std::vector<QFactor> yun(const QPoly& f) {
  std::vector<QFactor> out;
  auto a = poly::monic(QQ, f);
  auto d = poly::derivative(QQ, a);
  auto b = poly::gcd(QQ, a, d);
  auto c = poly::div_exact(QQ, a, b);
  auto dd = poly::div_exact(QQ, d, b);
  int i = 1;
  while (poly::degree<RationalField>(c) > 0) {
    auto y = poly::sub(QQ, dd, poly::derivative(QQ, c));
    auto g = poly::gcd(QQ, c, y);
    if (poly::degree<RationalField>(g) > 0) out.push_back({g, i});
    c = poly::div_exact(QQ, c, g);
    dd = poly::div_exact(QQ, y, g);
    ++i;
  }
  return out;
}

inline Integer coefficient_bound(const ZPoly& g) {
  Integer mx = 0;
  for (const auto& c : g) mx = std::max(mx, Integer(abs(c)));
  long n = static_cast<long>(g.size()) - 1;
  return ipow(Integer(2), static_cast<unsigned long>(n)) * Integer(n + 1) * mx * abs(g.back());
}

/// Factors a squarefree primitive integer polynomial of positive degree.
inline std::vector<QPoly> zassenhaus(const ZPoly& g) {
  long n = static_cast<long>(g.size()) - 1;
  if (n == 1) return {poly::monic(QQ, to_qpoly(g))};
  // Pick, among the first few admissible primes, one giving fewest modular factors.
  std::int64_t best_p = 0;
  std::vector<FiniteFactor<PrimeField>> best;
  int tried = 0;
  for (std::int64_t p = 3; tried < 6 && p < 10000; p += 2) {
    if (!is_prime(p)) continue;
    PrimeField fp(p);
    if (fp.from_integer(g.back()) == 0) continue;
    auto gb = reduce_mod_p(fp, g);
    if (poly::degree<PrimeField>(poly::gcd(fp, gb, poly::derivative(fp, gb))) != 0) continue;
    auto fs = factor_finite(fp, gb);
    ++tried;
    if (best_p == 0 || fs.size() < best.size()) {
      best_p = p;
      best = fs;
    }
    if (best.size() == 1) break;
  }
  if (best_p == 0) throw ResourceError("no admissible prime for factorization");
  if (best.size() == 1) return {poly::monic(QQ, to_qpoly(g))};

  Integer P(static_cast<long>(best_p));
  Integer bound = 2 * coefficient_bound(g);
  long k = 1;
  Integer M = P;
  while (M <= bound) {
    M *= P;
    ++k;
  }
  std::vector<FpPoly> mods;
  for (auto& f : best) mods.push_back(f.factor);
  auto lifted = hensel_lift(g, mods, best_p, k);

  std::vector<QPoly> out;
  ZPoly rest = g;
  std::vector<ZPoly> remaining = lifted;
  std::size_t s = 1;
  while (2 * s <= remaining.size()) {
    bool found = false;
    std::vector<std::size_t> idx(s);
    for (std::size_t i = 0; i < s; ++i) idx[i] = i;
    while (true) {
      Integer lc = rest.back();
      ZPoly cand{lc};
      for (auto i : idx) cand = zmod::reduce(zmod::mul(cand, remaining[i]), M);
      cand = zmod::sym_reduce(cand, M);
      auto [prim, scal] = primitive_part(to_qpoly(cand));
      auto [q, r] = poly::divmod(QQ, to_qpoly(rest), to_qpoly(prim));
      if (r.empty() && is_integral(q)) {
        out.push_back(poly::monic(QQ, to_qpoly(prim)));
        rest = primitive_part(q).first;
        std::vector<ZPoly> next;
        for (std::size_t i = 0, j = 0; i < remaining.size(); ++i) {
          if (j < s && idx[j] == i) {
            ++j;
            continue;
          }
          next.push_back(remaining[i]);
        }
        remaining = std::move(next);
        found = true;
        break;
      }
      // Next combination.
      std::size_t pos = s;
      while (pos > 0 && idx[pos - 1] == remaining.size() - s + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < s; ++i) idx[i] = idx[i - 1] + 1;
    }
    if (!found) ++s;
  }
  if (rest.size() > 1) out.push_back(poly::monic(QQ, to_qpoly(rest)));
  return out;
}

inline bool qpoly_less(const QPoly& a, const QPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

}  // namespace detail

/// Factorization over Q into monic irreducibles with multiplicities, sorted
/// by degree then coefficients. The leading coefficient of f is dropped.
inline std::vector<QFactor> factor_over_Q(const QPoly& f) {
  QPoly g = f;
  poly::trim(QQ, g);
  if (g.empty()) throw PreconditionError("factor_over_Q: zero polynomial");
  std::vector<QFactor> out;
  if (g.size() == 1) return out;
  for (auto& sf : detail::yun(g)) {
    auto prim = primitive_part(sf.factor).first;
    for (auto& fac : detail::zassenhaus(prim)) out.push_back({fac, sf.multiplicity});
  }
  std::sort(out.begin(), out.end(), [](const QFactor& a, const QFactor& b) {
    if (detail::qpoly_less(a.factor, b.factor)) return true;
    if (detail::qpoly_less(b.factor, a.factor)) return false;
    return a.multiplicity < b.multiplicity;
  });
  return out;
}

inline bool is_irreducible_over_Q(const QPoly& f) {
  if (poly::degree<RationalField>(f) < 1) return false;
  auto fs = factor_over_Q(f);
  return fs.size() == 1 && fs[0].multiplicity == 1;
}

}  // namespace tpval
