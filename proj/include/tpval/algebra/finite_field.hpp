#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tpval/algebra/integer.hpp"
#include "tpval/algebra/polynomial.hpp"

namespace tpval {

/// Z/p for a prime p < 2^31.
class PrimeField {
 public:
  using Elem = std::int64_t;

  explicit PrimeField(std::int64_t p) : p_(p) {
    if (p < 2 || p >= (std::int64_t{1} << 31) || !is_prime(p))
      throw PreconditionError("PrimeField: " + std::to_string(p) + " is not a supported prime");
  }

  std::int64_t characteristic() const { return p_; }
  int degree() const { return 1; }
  Integer size() const { return Integer(static_cast<long>(p_)); }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(long n) const { return ((n % p_) + p_) % p_; }
  Elem from_integer(const Integer& n) const {
    return static_cast<Elem>(pmod(n, Integer(static_cast<long>(p_))).get_si());
  }
  Elem add(Elem a, Elem b) const { return (a + b) % p_; }
  Elem sub(Elem a, Elem b) const { return (a - b + p_) % p_; }
  Elem mul(Elem a, Elem b) const { return (a * b) % p_; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem inv(Elem a) const {
    if (a == 0) throw PreconditionError("division by zero in F_" + std::to_string(p_));
    return mod_inverse(a, p_);
  }
  bool is_zero(Elem a) const { return a == 0; }
  bool equal(Elem a, Elem b) const { return a == b; }
  bool less(Elem a, Elem b) const { return a < b; }
  Elem pth_root(Elem a) const { return a; }
  Elem frobenius(Elem a) const { return a; }
  template <class Rng>
  Elem random(Rng& rng) const {
    return std::uniform_int_distribution<std::int64_t>(0, p_ - 1)(rng);
  }
  Elem element(std::int64_t index) const { return index % p_; }
  std::string format(Elem a) const { return std::to_string(a); }

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

 private:
  std::int64_t p_;
};

using FpPoly = Poly<PrimeField>;

namespace detail {

inline Integer pow_int(const Integer& b, long e) { return ipow(b, static_cast<unsigned long>(e)); }

/// Rabin irreducibility test over F_p.
inline bool is_irreducible_fp(const PrimeField& k, const FpPoly& f) {
  int n = poly::degree<PrimeField>(f);
  if (n <= 0) return false;
  if (n == 1) return true;
  FpPoly x{0, 1};
  Integer p = k.size();
  auto frob_pow = [&](int i) { return poly::powmod(k, x, pow_int(p, i), f); };
  if (!poly::equal(k, frob_pow(n), poly::mod(k, x, f))) return false;
  for (int r = 2; r <= n; ++r) {
    if (n % r != 0 || !is_prime(std::int64_t{r})) continue;
    auto h = poly::sub(k, frob_pow(n / r), x);
    if (poly::degree<PrimeField>(poly::gcd(k, f, h)) != 0) return false;
  }
  return true;
}

}  // namespace detail

/// The canonical modulus of F_{p^f}: the least monic irreducible polynomial
/// of degree f, ordering candidates by the integer sum c_i p^i of their
/// non-leading coefficients.
inline FpPoly canonical_modulus(std::int64_t p, int f) {
  static std::mutex mu;
  static std::map<std::pair<std::int64_t, int>, FpPoly> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({p, f});
    if (it != cache.end()) return it->second;
  }
  PrimeField k(p);
  Integer count = ipow(Integer(static_cast<long>(p)), static_cast<unsigned long>(f));
  if (count > Integer(50'000'000L)) throw ResourceError("finite field too large for modulus search");
  FpPoly result;
  for (long idx = 0; Integer(idx) < count; ++idx) {
    FpPoly g(f + 1, 0);
    long t = idx;
    for (int i = 0; i < f; ++i) {
      g[i] = t % p;
      t /= p;
    }
    g[f] = 1;
    if (detail::is_irreducible_fp(k, g)) {
      result = g;
      break;
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  cache[{p, f}] = result;
  return result;
}

/// F_{p^f} = F_p[T]/(canonical modulus); elements are coefficient vectors of
/// length exactly f.
class GaloisField {
 public:
  using Elem = std::vector<std::int64_t>;

  GaloisField(std::int64_t p, int f) : base_(p), f_(f) {
    if (f < 1) throw PreconditionError("GaloisField degree must be positive");
    modulus_ = canonical_modulus(p, f);
    size_ = ipow(Integer(static_cast<long>(p)), static_cast<unsigned long>(f));
  }

  const PrimeField& prime_field() const { return base_; }
  const FpPoly& modulus() const { return modulus_; }
  std::int64_t characteristic() const { return base_.characteristic(); }
  int degree() const { return f_; }
  Integer size() const { return size_; }

  Elem zero() const { return Elem(f_, 0); }
  Elem one() const {
    Elem e(f_, 0);
    e[0] = 1;
    return e;
  }
  Elem from_int(long n) const {
    Elem e(f_, 0);
    e[0] = base_.from_int(n);
    return e;
  }
  Elem from_prime(std::int64_t n) const { return from_int(static_cast<long>(n)); }
  /// The class of T.
  Elem generator() const {
    if (f_ == 1) return from_int(static_cast<long>(base_.neg(modulus_[0])));
    Elem e(f_, 0);
    e[1] = 1;
    return e;
  }
  Elem from_poly(const FpPoly& a) const {
    auto r = poly::mod(base_, a, modulus_);
    Elem e(f_, 0);
    for (std::size_t i = 0; i < r.size(); ++i) e[i] = r[i];
    return e;
  }
  FpPoly to_poly(const Elem& a) const {
    FpPoly r(a.begin(), a.end());
    poly::trim(base_, r);
    return r;
  }
  Elem add(const Elem& a, const Elem& b) const {
    Elem r(f_);
    for (int i = 0; i < f_; ++i) r[i] = base_.add(a[i], b[i]);
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r(f_);
    for (int i = 0; i < f_; ++i) r[i] = base_.sub(a[i], b[i]);
    return r;
  }
  Elem neg(const Elem& a) const {
    Elem r(f_);
    for (int i = 0; i < f_; ++i) r[i] = base_.neg(a[i]);
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    if (f_ == 1) return Elem{base_.mul(a[0], b[0])};
    return from_poly(poly::mul(base_, to_poly(a), to_poly(b)));
  }
  Elem inv(const Elem& a) const {
    if (is_zero(a)) throw PreconditionError("division by zero in F_q");
    if (f_ == 1) return Elem{base_.inv(a[0])};
    auto [g, s, t] = poly::ext_gcd(base_, to_poly(a), modulus_);
    return from_poly(s);
  }
  bool is_zero(const Elem& a) const {
    return std::all_of(a.begin(), a.end(), [](std::int64_t c) { return c == 0; });
  }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }
  bool less(const Elem& a, const Elem& b) const {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  }
  Elem pow(Elem a, Integer e) const {
    Elem r = one();
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = mul(r, a);
      e >>= 1;
      if (e > 0) a = mul(a, a);
    }
    return r;
  }
  Elem frobenius(const Elem& a) const { return pow(a, Integer(static_cast<long>(characteristic()))); }
  Elem pth_root(const Elem& a) const { return pow(a, size_ / characteristic()); }
  template <class Rng>
  Elem random(Rng& rng) const {
    Elem e(f_);
    for (auto& c : e) c = base_.random(rng);
    return e;
  }
  /// Enumeration order: index = sum c_i p^i.
  Elem element(std::int64_t index) const {
    Elem e(f_);
    for (int i = 0; i < f_; ++i) {
      e[i] = index % characteristic();
      index /= characteristic();
    }
    return e;
  }
  std::int64_t index_of(const Elem& a) const {
    std::int64_t idx = 0;
    for (int i = f_; i-- > 0;) idx = idx * characteristic() + a[i];
    return idx;
  }
  std::string format(const Elem& a) const {
    std::ostringstream os;
    for (int i = 0; i < f_; ++i) os << (i ? ":" : "") << a[i];
    return os.str();
  }
  Elem parse(const std::string& s) const {
    Elem e(f_, 0);
    std::istringstream is(s);
    std::string part;
    int i = 0;
    while (std::getline(is, part, ':')) {
      if (i >= f_) throw ParseError("too many digits in F_q element '" + s + "'");
      try {
        e[i++] = base_.from_int(std::stol(part));
      } catch (const std::logic_error&) {
        throw ParseError("malformed F_q element '" + s + "'");
      }
    }
    return e;
  }

  bool operator==(const GaloisField& o) const {
    return characteristic() == o.characteristic() && f_ == o.f_;
  }

 private:
  PrimeField base_;
  int f_;
  FpPoly modulus_;
  Integer size_;
};

// ---------------------------------------------------------------------------
// Factorization over finite fields (squarefree, distinct degree, equal degree)

template <class F>
struct FiniteFactor {
  Poly<F> factor;
  int multiplicity;
};

namespace detail {

template <class F>
Poly<F> poly_pth_root(const F& k, const Poly<F>& a) {
  std::int64_t p = k.characteristic();
  Poly<F> r;
  for (std::size_t i = 0; i < a.size(); i += static_cast<std::size_t>(p)) r.push_back(k.pth_root(a[i]));
  poly::trim(k, r);
  return r;
}

template <class F>
std::vector<FiniteFactor<F>> squarefree_decomposition(const F& k, const Poly<F>& f) {
  std::vector<FiniteFactor<F>> out;
  Poly<F> one{k.one()};
  auto d = poly::derivative(k, f);
  if (d.empty()) {
    for (auto& sf : squarefree_decomposition(k, poly_pth_root(k, f)))
      out.push_back({sf.factor, sf.multiplicity * static_cast<int>(k.characteristic())});
    return out;
  }
  auto c = poly::gcd(k, f, d);
  auto w = poly::div_exact(k, f, c);
  int i = 1;
  while (poly::degree<F>(w) > 0) {
    auto y = poly::gcd(k, w, c);
    auto fac = poly::div_exact(k, w, y);
    if (poly::degree<F>(fac) > 0) out.push_back({poly::monic(k, fac), i});
    w = y;
    c = poly::div_exact(k, c, y);
    ++i;
  }
  if (poly::degree<F>(c) > 0) {
    for (auto& sf : squarefree_decomposition(k, poly_pth_root(k, c)))
      out.push_back({sf.factor, sf.multiplicity * static_cast<int>(k.characteristic())});
  }
  return out;
}

/// x^(q^i) mod f by repeated q-th powering.
template <class F>
std::vector<std::pair<Poly<F>, int>> distinct_degree(const F& k, Poly<F> f) {
  std::vector<std::pair<Poly<F>, int>> out;
  Poly<F> x{k.zero(), k.one()};
  Poly<F> h = poly::mod(k, x, f);
  int i = 0;
  while (poly::degree<F>(f) >= 2 * (i + 1)) {
    ++i;
    h = poly::powmod(k, h, k.size(), f);
    auto g = poly::gcd(k, f, poly::sub(k, h, x));
    if (poly::degree<F>(g) > 0) {
      out.push_back({g, i});
      f = poly::div_exact(k, f, g);
      h = poly::mod(k, h, f);
    }
  }
  if (poly::degree<F>(f) > 0) out.push_back({poly::monic(k, f), poly::degree<F>(f)});
  return out;
}

template <class F, class Rng>
void equal_degree(const F& k, const Poly<F>& f, int d, Rng& rng, std::vector<Poly<F>>& out) {
  int n = poly::degree<F>(f);
  if (n == d) {
    out.push_back(poly::monic(k, f));
    return;
  }
  Integer q = k.size();
  while (true) {
    Poly<F> a;
    for (int i = 0; i < n; ++i) a.push_back(k.random(rng));
    poly::trim(k, a);
    if (poly::degree<F>(a) < 1) continue;
    Poly<F> b;
    if (k.characteristic() == 2) {
      // Trace from F_{q^d} to F_2.
      long m = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2) - 1) * d;
      Poly<F> t = a;
      b = a;
      for (long i = 1; i < m; ++i) {
        t = poly::mod(k, poly::mul(k, t, t), f);
        b = poly::add(k, b, t);
      }
    } else {
      Integer e = (ipow(q, static_cast<unsigned long>(d)) - 1) / 2;
      b = poly::sub(k, poly::powmod(k, a, e, f), Poly<F>{k.one()});
    }
    auto g = poly::gcd(k, f, b);
    int dg = poly::degree<F>(g);
    if (dg > 0 && dg < n) {
      equal_degree(k, g, d, rng, out);
      equal_degree(k, poly::div_exact(k, f, g), d, rng, out);
      return;
    }
  }
}

template <class F>
bool poly_less(const F& k, const Poly<F>& a, const Poly<F>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = a.size(); i-- > 0;) {
    if (k.less(a[i], b[i])) return true;
    if (k.less(b[i], a[i])) return false;
  }
  return false;
}

}  // namespace detail

/// Monic irreducible factors with multiplicities, sorted by degree and then
/// coefficients (highest first). Deterministic.
template <class F>
std::vector<FiniteFactor<F>> factor_finite(const F& k, const Poly<F>& f) {
  if (f.empty()) throw PreconditionError("factorization of the zero polynomial");
  std::vector<FiniteFactor<F>> out;
  std::mt19937_64 rng(0x5eed);
  for (auto& sf : detail::squarefree_decomposition(k, poly::monic(k, f))) {
    for (auto& [g, d] : detail::distinct_degree(k, sf.factor)) {
      std::vector<Poly<F>> parts;
      detail::equal_degree(k, g, d, rng, parts);
      for (auto& part : parts) out.push_back({part, sf.multiplicity});
    }
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    if (detail::poly_less(k, a.factor, b.factor)) return true;
    if (detail::poly_less(k, b.factor, a.factor)) return false;
    return a.multiplicity < b.multiplicity;
  });
  return out;
}

template <class F>
std::vector<typename F::Elem> roots_finite(const F& k, const Poly<F>& f) {
  std::vector<typename F::Elem> out;
  for (auto& fac : factor_finite(k, f))
    if (poly::degree<F>(fac.factor) == 1) out.push_back(k.neg(fac.factor[0]));
  return out;
}

template <class F>
bool is_irreducible_finite(const F& k, const Poly<F>& f) {
  if (poly::degree<F>(f) < 1) return false;
  auto fs = factor_finite(k, f);
  return fs.size() == 1 && fs[0].multiplicity == 1;
}

/// Reduction of an integer polynomial modulo p.
inline FpPoly reduce_mod_p(const PrimeField& k, const std::vector<Integer>& z) {
  FpPoly r;
  for (const auto& c : z) r.push_back(k.from_integer(c));
  poly::trim(k, r);
  return r;
}

/// Image of a polynomial over F_p in F_q[x].
inline Poly<GaloisField> lift_to_gf(const GaloisField& k, const FpPoly& f) {
  Poly<GaloisField> r;
  for (auto c : f) r.push_back(k.from_prime(c));
  poly::trim(k, r);
  return r;
}

}  // namespace tpval
