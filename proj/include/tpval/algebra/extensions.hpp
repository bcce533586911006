#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tpval/algebra/number_field.hpp"

namespace tpval {

/// source -> target, determined by the image of the source generator.
class FieldEmbedding {
 public:
  FieldEmbedding(NumberField source, NumberField target, QPoly image_of_generator)
      : source_(std::move(source)), target_(std::move(target)), image_(target_.reduce(image_of_generator)) {
    auto v = poly::eval(target_, to_kpoly(target_, source_.minpoly()), image_);
    if (!v.empty()) throw PreconditionError("embedding: image is not a root of the source minpoly");
  }

  static FieldEmbedding identity(const NumberField& k) { return {k, k, k.generator()}; }

  const NumberField& source() const { return source_; }
  const NumberField& target() const { return target_; }
  const QPoly& image_of_generator() const { return image_; }

  QPoly apply(const QPoly& x) const {
    QPoly acc;
    for (std::size_t i = x.size(); i-- > 0;)
      acc = target_.add(target_.mul(acc, image_), target_.from_rational(x[i]));
    return acc;
  }
  FieldElement apply(const FieldElement& x) const { return {target_, apply(x.repr)}; }

  KPoly apply(const KPoly& f) const {
    KPoly r;
    for (const auto& c : f) r.push_back(apply(c));
    poly::trim(target_, r);
    return r;
  }

  /// (this after first): first.source -> this.target
  FieldEmbedding after(const FieldEmbedding& first) const {
    if (first.target_ != source_) throw PreconditionError("embedding composition: field mismatch");
    return {first.source_, target_, apply(first.image_)};
  }

  /// x with apply(x) = y, if y lies in the image.
  std::optional<QPoly> preimage(const QPoly& y) const {
    int ns = source_.degree(), nt = target_.degree();
    linalg::Matrix<RationalField> a(static_cast<std::size_t>(nt), std::vector<Rational>(ns, Rational(0)));
    QPoly power = target_.one();
    for (int j = 0; j < ns; ++j) {
      for (std::size_t i = 0; i < power.size(); ++i) a[i][j] = power[i];
      power = target_.mul(power, image_);
    }
    std::vector<Rational> b(static_cast<std::size_t>(nt), Rational(0));
    for (std::size_t i = 0; i < y.size(); ++i) b[i] = y[i];
    auto sol = linalg::solve(QQ, a, b);
    if (!sol) return std::nullopt;
    QPoly x(sol->begin(), sol->end());
    poly::trim(QQ, x);
    return x;
  }

  friend bool operator==(const FieldEmbedding& a, const FieldEmbedding& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.image_ == b.image_;
  }

 private:
  NumberField source_;
  NumberField target_;
  QPoly image_;
};

struct Limits {
  int degree_bound = 6;        // max degree of a polynomial handed to splitting_field
  int field_degree_bound = 48; // max absolute degree of any constructed field
  long precision = 20;         // starting p-adic precision (digits)
};

namespace detail {

/// g(x - s*a) evaluated at x = x0, as an element of k.
inline QPoly shifted_value(const NumberField& k, const KPoly& g, const Rational& x0, long s) {
  QPoly arg = k.sub(k.from_rational(x0), k.mul(k.from_int(s), k.generator()));
  return poly::eval(k, g, arg);
}

/// Norm_{k/Q} of g(x - s*a) as a rational polynomial.
inline QPoly shifted_norm(const NumberField& k, const KPoly& g, long s) {
  int deg = k.degree() * poly::degree<NumberField>(g);
  std::vector<Rational> xs, ys;
  for (int i = 0; i <= deg; ++i) {
    xs.emplace_back(i);
    ys.push_back(k.norm(shifted_value(k, g, Rational(i), s)));
  }
  return interpolate(xs, ys);
}

inline long shift_candidate(int i) { return (i % 2 == 1) ? (i + 1) / 2 : -(i / 2); }

inline bool is_squarefree_q(const QPoly& f) {
  return poly::degree<RationalField>(poly::gcd(QQ, f, poly::derivative(QQ, f))) == 0;
}

}  // namespace detail

/// Monic irreducible factors of a nonzero polynomial over k, with
/// multiplicities, in canonical order.
inline std::vector<std::pair<KPoly, int>> factor_over_field(const NumberField& k, const KPoly& f) {
  KPoly g = f;
  poly::trim(k, g);
  if (g.empty()) throw PreconditionError("factor_over_field: zero polynomial");
  std::vector<std::pair<KPoly, int>> out;
  if (g.size() == 1) return out;
  if (k.is_rationals()) {
    QPoly q;
    for (const auto& c : g) q.push_back(c.empty() ? Rational(0) : c[0]);
    for (auto& fac : factor_over_Q(q)) out.push_back({to_kpoly(k, fac.factor), fac.multiplicity});
    return out;
  }
  // Squarefree decomposition (Yun) over k.
  std::vector<std::pair<KPoly, int>> sqf;
  {
    auto a = poly::monic(k, g);
    auto d = poly::derivative(k, a);
    auto b = poly::gcd(k, a, d);
    auto c = poly::div_exact(k, a, b);
    auto dd = poly::div_exact(k, d, b);
    int i = 1;
    while (poly::degree<NumberField>(c) > 0) {
      auto y = poly::sub(k, dd, poly::derivative(k, c));
      auto h = poly::gcd(k, c, y);
      if (poly::degree<NumberField>(h) > 0) sqf.push_back({h, i});
      c = poly::div_exact(k, c, h);
      dd = poly::div_exact(k, y, h);
      ++i;
    }
  }
  for (auto& [h, mult] : sqf) {
    if (poly::degree<NumberField>(h) == 1) {
      out.push_back({h, mult});
      continue;
    }
    for (int attempt = 0;; ++attempt) {
      if (attempt > 200) throw ResourceError("factor_over_field: no squarefree norm shift found");
      long s = detail::shift_candidate(attempt);
      QPoly n = detail::shifted_norm(k, h, s);
      if (!detail::is_squarefree_q(n)) continue;
      // x + s*a
      KPoly back{k.mul(k.from_int(s), k.generator()), k.one()};
      KPoly rest = h;
      for (auto& fac : factor_over_Q(n)) {
        KPoly shifted = poly::compose(k, to_kpoly(k, fac.factor), back);
        auto part = poly::gcd(k, rest, shifted);
        if (poly::degree<NumberField>(part) > 0) {
          out.push_back({part, mult});
          rest = poly::div_exact(k, rest, part);
        }
      }
      break;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (kpoly_less(a.first, b.first)) return true;
    if (kpoly_less(b.first, a.first)) return false;
    return a.second < b.second;
  });
  return out;
}

/// Distinct roots of f in k, sorted.
inline std::vector<QPoly> roots_in_field(const NumberField& k, const KPoly& f) {
  std::vector<QPoly> out;
  for (auto& [fac, m] : factor_over_field(k, f))
    if (poly::degree<NumberField>(fac) == 1) out.push_back(k.neg(fac[0]));
  std::sort(out.begin(), out.end(), element_less);
  return out;
}

inline bool is_irreducible_over(const NumberField& k, const KPoly& f) {
  if (poly::degree<NumberField>(f) < 1) return false;
  auto fs = factor_over_field(k, f);
  return fs.size() == 1 && fs[0].second == 1;
}

struct SimpleExtension {
  NumberField field;
  FieldEmbedding embedding;  // base -> field
  QPoly root;                // a root of the adjoined polynomial
};

/// k(b) for a root b of the irreducible h over k, with a primitive element
/// b + s*a found by trying s = 0, 1, -1, 2, ...
inline SimpleExtension adjoin_root(const NumberField& k, const KPoly& h, const std::string& label,
                                   const Limits& limits = {}) {
  int deg = k.degree() * poly::degree<NumberField>(h);
  if (deg > limits.field_degree_bound)
    throw ResourceError("field degree " + std::to_string(deg) + " exceeds bound " +
                        std::to_string(limits.field_degree_bound));
  for (int attempt = 0; attempt < 200; ++attempt) {
    long s = detail::shift_candidate(attempt);
    QPoly n = detail::shifted_norm(k, poly::monic(k, h), s);
    if (!detail::is_squarefree_q(n)) continue;
    n = poly::monic(QQ, n);
    NumberField m(n, label);
    // gcd over m of minpoly_k(y) and h~(gamma - s*y, y) is (y - a).
    KPoly gamma_minus{m.generator(), m.from_int(-s)};
    KPoly big;
    for (std::size_t j = h.size(); j-- > 0;) {
      big = poly::mul(m, big, gamma_minus);
      KPoly coeff = to_kpoly(m, h[j]);
      big = poly::add(m, big, coeff);
    }
    auto g = poly::gcd(m, to_kpoly(m, k.minpoly()), big);
    if (poly::degree<NumberField>(g) != 1) throw InvariantViolation("adjoin_root: primitive element recovery failed");
    QPoly a_image = m.neg(g[0]);
    QPoly b = m.sub(m.generator(), m.mul(m.from_int(s), a_image));
    return {m, FieldEmbedding(k, m, a_image), b};
  }
  throw ResourceError("adjoin_root: no primitive element found");
}

struct SplittingField {
  NumberField field;
  std::vector<QPoly> roots;  // distinct roots, sorted
  FieldEmbedding base;       // base -> field
};

/// Splitting field of f over k (iterated primitive elements).
inline SplittingField splitting_field(const NumberField& k, const KPoly& f, const Limits& limits = {},
                                      const std::string& label = "") {
  KPoly g = f;
  poly::trim(k, g);
  if (g.empty()) throw PreconditionError("splitting_field: zero polynomial");
  int deg = poly::degree<NumberField>(g);
  if (deg > limits.degree_bound)
    throw ResourceError("splitting_field: degree " + std::to_string(deg) + " exceeds bound " +
                        std::to_string(limits.degree_bound));
  NumberField cur = k;
  FieldEmbedding emb = FieldEmbedding::identity(k);
  std::vector<QPoly> roots;
  KPoly rest = poly::squarefree_part_char0(k, g);
  int step = 0;
  while (poly::degree<NumberField>(rest) > 0) {
    auto factors = factor_over_field(cur, rest);
    const KPoly* nonlinear = nullptr;
    for (auto& [fac, m] : factors) {
      if (poly::degree<NumberField>(fac) == 1) {
        roots.push_back(cur.neg(fac[0]));
        rest = poly::div_exact(cur, rest, fac);
      } else if (!nonlinear || poly::degree<NumberField>(fac) < poly::degree<NumberField>(*nonlinear)) {
        nonlinear = &fac;
      }
    }
    if (!nonlinear) break;
    std::string lbl = label.empty() ? k.label() + "(r" + std::to_string(++step) + ")" : label;
    auto ext = adjoin_root(cur, *nonlinear, lbl, limits);
    for (auto& r : roots) r = ext.embedding.apply(r);
    rest = ext.embedding.apply(rest);
    emb = ext.embedding.after(emb);
    cur = ext.field;
  }
  std::sort(roots.begin(), roots.end(), element_less);
  if (!label.empty() && cur == k) cur = NumberField(cur.minpoly(), label);
  return {cur, roots, FieldEmbedding(k, cur, emb.image_of_generator())};
}

inline SplittingField splitting_field(const QPoly& f, const Limits& limits = {}, const std::string& label = "") {
  NumberField q = NumberField::rationals();
  return splitting_field(q, to_kpoly(q, f), limits, label);
}

/// Roots in l of its own minimal polynomial, sorted. Cached per minimal
/// polynomial: this factorization dominates every Galois computation.
inline std::vector<QPoly> generator_conjugates(const NumberField& l) {
  static std::mutex mu;
  static std::map<std::string, std::vector<QPoly>> cache;
  std::string key = format_qpoly(l.minpoly());
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto roots = roots_in_field(l, to_kpoly(l, l.minpoly()));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(roots)).first->second;
}

/// All automorphisms of a normal field; identity first, the rest sorted by
/// image of the generator.
inline std::vector<FieldEmbedding> automorphisms(const NumberField& l) {
  auto roots = generator_conjugates(l);
  if (static_cast<int>(roots.size()) != l.degree())
    throw PreconditionError("automorphisms: field " + l.label() + " is not normal over Q");
  std::vector<FieldEmbedding> out;
  out.push_back(FieldEmbedding::identity(l));
  for (auto& r : roots)
    if (r != l.generator()) out.emplace_back(l, l, r);
  return out;
}

/// Automorphisms of l fixing the image of k pointwise.
inline std::vector<FieldEmbedding> relative_automorphisms(const NumberField& l, const FieldEmbedding& k_image) {
  if (k_image.target() != l) throw PreconditionError("relative_automorphisms: embedding target mismatch");
  std::vector<FieldEmbedding> out;
  auto all_roots = generator_conjugates(l);
  for (auto& r : all_roots) {
    FieldEmbedding s(l, l, r);
    if (s.apply(k_image.image_of_generator()) == k_image.image_of_generator()) out.push_back(s);
  }
  if (static_cast<int>(out.size()) * k_image.source().degree() != l.degree())
    throw PreconditionError("relative_automorphisms: " + l.label() + " is not normal over " +
                            k_image.source().label());
  std::stable_sort(out.begin(), out.end(), [&](const FieldEmbedding& a, const FieldEmbedding& b) {
    bool ai = a.image_of_generator() == l.generator(), bi = b.image_of_generator() == l.generator();
    if (ai != bi) return ai;
    return element_less(a.image_of_generator(), b.image_of_generator());
  });
  return out;
}

/// Some embedding k -> l (the first in canonical root order), if any.
inline std::optional<FieldEmbedding> find_embedding(const NumberField& k, const NumberField& l) {
  if (l.degree() % k.degree() != 0) return std::nullopt;
  auto roots = roots_in_field(l, to_kpoly(l, k.minpoly()));
  if (roots.empty()) return std::nullopt;
  return FieldEmbedding(k, l, roots.front());
}

inline bool is_normal_over_Q(const NumberField& l) {
  return static_cast<int>(generator_conjugates(l).size()) == l.degree();
}

}  // namespace tpval
