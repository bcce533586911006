#pragma once

#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "tpval/valuation/padic_local.hpp"

namespace tpval {

/// Residue field of a number-field valuation: K itself for the trivial
/// valuation, F_{p^f} (canonical modulus) for a p-adic one.
struct ResidueField {
  enum class Kind { Finite, Number };
  Kind kind = Kind::Number;
  std::int64_t characteristic = 0;
  int degree = 1;  // f for finite fields
  NumberField number;

  GaloisField finite() const {
    if (kind != Kind::Finite) throw PreconditionError("residue field is not finite");
    return GaloisField(characteristic, degree);
  }
};

using ResidueElem = std::variant<GaloisField::Elem, QPoly>;

/// A valuation ring on a number field: the trivial ring K or one extension
/// of a p-adic valuation, normalized by v(p) = 1.
class ValuationHandle {
 public:
  enum class Kind { Trivial, Padic };

  static ValuationHandle trivial(const NumberField& k) { return ValuationHandle(k, nullptr); }
  static ValuationHandle padic(padic::PrimePtr prime) {
    NumberField k = prime->field;
    return ValuationHandle(std::move(k), std::move(prime));
  }

  Kind kind() const { return prime_ ? Kind::Padic : Kind::Trivial; }
  bool is_trivial() const { return !prime_; }
  const NumberField& field() const { return field_; }
  std::int64_t prime() const { return prime_ ? prime_->p : 0; }
  int e() const { return prime_ ? prime_->e : 1; }
  int f() const { return prime_ ? prime_->f : 1; }
  const padic::PrimePtr& local() const { return prime_; }
  long precision() const { return prime_ ? prime_->pin_k : 20; }

  ResidueField residue_field() const {
    if (!prime_) return {ResidueField::Kind::Number, 0, 1, field_};
    return {ResidueField::Kind::Finite, prime_->p, prime_->f, field_};
  }

  ValueVec value(const QPoly& x) const {
    QPoly r = field_.reduce(x);
    if (r.empty()) return ValueVec::infinity();
    if (!prime_) return ValueVec::zero();
    if (field_.is_rationals()) return ValueVec::of(Rational(vp(r[0], static_cast<unsigned long>(prime_->p))));
    return ValueVec::of(prime_->value(r, precision()));
  }
  ValueVec value(const FieldElement& x) const {
    check_field(x.field);
    return value(x.repr);
  }

  Membership membership(const QPoly& x) const { return membership_of(value(x)); }
  bool in_ring(const QPoly& x) const { return value(x).sign() >= 0; }
  bool in_maximal_ideal(const QPoly& x) const { return value(x).sign() > 0; }

  /// Residue in F_q; the valuation must be p-adic and x integral.
  GaloisField::Elem residue_finite(const QPoly& x) const {
    if (!prime_) throw PreconditionError("residue_finite on the trivial valuation");
    QPoly r = field_.reduce(x);
    if (value(r).sign() < 0) throw PreconditionError("residue: element is not in the valuation ring");
    if (field_.is_rationals()) {
      Integer m(static_cast<long>(prime_->p));
      GaloisField::Elem e{static_cast<std::int64_t>(r.empty() ? 0 : rational_mod(r[0], m).get_si())};
      return e;
    }
    return prime_->residue(r, precision());
  }

  ResidueElem residue(const QPoly& x) const {
    if (!prime_) return field_.reduce(x);
    return residue_finite(x);
  }
  ResidueElem residue(const FieldElement& x) const {
    check_field(x.field);
    return residue(x.repr);
  }

  /// An element of the valuation ring with the given residue.
  QPoly lift(const ResidueElem& c) const {
    if (!prime_) return field_.reduce(std::get<QPoly>(c));
    const auto& g = std::get<GaloisField::Elem>(c);
    if (field_.is_rationals()) return field_.from_int(static_cast<long>(g.at(0)));
    return prime_->lift(g);
  }

  /// `trivial` or `padic p=.. e=.. f=.. pin=.. k=.. fp=..`.
  std::string serialize() const {
    if (!prime_) return "trivial";
    std::ostringstream os;
    os << "padic p=" << prime_->p << " e=" << prime_->e << " f=" << prime_->f
       << " pin=" << padic::detail::hex_pin(prime_->pin) << " k=" << prime_->pin_k << " fp=" << prime_->fingerprint;
    return os.str();
  }

  friend bool operator==(const ValuationHandle& a, const ValuationHandle& b) {
    if (a.field_ != b.field_ || a.kind() != b.kind()) return false;
    if (!a.prime_) return true;
    return a.prime_ == b.prime_ ||
           (a.prime_->p == b.prime_->p && a.prime_->pin_k == b.prime_->pin_k && a.prime_->pin == b.prime_->pin);
  }
  friend bool operator!=(const ValuationHandle& a, const ValuationHandle& b) { return !(a == b); }

  /// Canonical order: trivial first, then by p, e, f, fingerprint, pin.
  friend bool operator<(const ValuationHandle& a, const ValuationHandle& b) {
    if (a.is_trivial() || b.is_trivial()) return a.is_trivial() && !b.is_trivial();
    const auto &x = *a.prime_, &y = *b.prime_;
    if (x.p != y.p) return x.p < y.p;
    if (x.e != y.e) return x.e < y.e;
    if (x.f != y.f) return x.f < y.f;
    if (x.fingerprint != y.fingerprint) return x.fingerprint < y.fingerprint;
    return padic::detail::zpoly_less(x.pin, y.pin);
  }

 private:
  ValuationHandle(NumberField k, padic::PrimePtr prime) : field_(std::move(k)), prime_(std::move(prime)) {}

  void check_field(const NumberField& k) const {
    if (k != field_) throw PreconditionError("element from " + k.label() + " given to a valuation on " + field_.label());
  }

  NumberField field_;
  padic::PrimePtr prime_;
};

/// Every extension of v_p to k, canonically ordered.
inline std::vector<ValuationHandle> padic_valuations(const NumberField& k, std::int64_t p, const Limits& limits = {}) {
  std::vector<ValuationHandle> out;
  for (auto& lp : padic::primes_above(k, p, limits.precision)) out.push_back(ValuationHandle::padic(lp));
  return out;
}

/// The p-adic valuation on Q.
inline ValuationHandle rational_padic(std::int64_t p) { return padic_valuations(NumberField::rationals(), p).front(); }

namespace padic::detail {

// Does w (on L) lie over the prime q of K, along emb: K -> L?
inline bool lies_over(const ValuationHandle& w, const LocalPrime& q, const FieldEmbedding& emb) {
  auto gf = w.residue_field().finite();
  auto r = w.residue_finite(emb.apply(q.beta));
  return gf.is_zero(poly::eval(gf, lift_to_gf(gf, q.psi), r));
}

}  // namespace padic::detail

/// The restriction of w (a valuation on emb.target()) to emb.source().
inline ValuationHandle restrict_valuation(const ValuationHandle& w, const FieldEmbedding& emb,
                                          const Limits& limits = {}) {
  if (emb.target() != w.field()) throw PreconditionError("restrict: embedding target is not the valuation's field");
  if (w.is_trivial()) return ValuationHandle::trivial(emb.source());
  std::optional<ValuationHandle> hit;
  for (auto& q : padic_valuations(emb.source(), w.prime(), limits)) {
    if (padic::detail::lies_over(w, *q.local(), emb)) {
      if (hit) throw InvariantViolation("restrict: valuation lies over two primes");
      hit = q;
    }
  }
  if (!hit) throw InvariantViolation("restrict: valuation lies over no prime");
  return *hit;
}

/// All extensions of v (on emb.source()) to emb.target().
inline std::vector<ValuationHandle> extend_valuation(const ValuationHandle& v, const FieldEmbedding& emb,
                                                     const Limits& limits = {}) {
  if (emb.source() != v.field()) throw PreconditionError("extend: embedding source is not the valuation's field");
  if (v.is_trivial()) return {ValuationHandle::trivial(emb.target())};
  std::vector<ValuationHandle> out;
  for (auto& w : padic_valuations(emb.target(), v.prime(), limits))
    if (padic::detail::lies_over(w, *v.local(), emb)) out.push_back(w);
  return out;
}

inline std::size_t count_extensions(const ValuationHandle& v, const FieldEmbedding& emb, const Limits& limits = {}) {
  return extend_valuation(v, emb, limits).size();
}

/// sigma_* w, the valuation y -> w(sigma^{-1} y) on sigma.target(); sigma
/// must be an isomorphism.
inline ValuationHandle push_forward(const ValuationHandle& w, const FieldEmbedding& sigma,
                                    const Limits& limits = {}) {
  if (sigma.source() != w.field()) throw PreconditionError("push_forward: field mismatch");
  if (sigma.source().degree() != sigma.target().degree())
    throw PreconditionError("push_forward: map is not an isomorphism");
  if (w.is_trivial()) return ValuationHandle::trivial(sigma.target());
  for (auto& q : padic_valuations(sigma.target(), w.prime(), limits)) {
    auto pre = sigma.preimage(q.local()->beta);
    if (!pre) throw InvariantViolation("push_forward: isomorphism not surjective");
    auto gf = w.residue_field().finite();
    auto r = w.residue_finite(*pre);
    if (gf.is_zero(poly::eval(gf, lift_to_gf(gf, q.local()->psi), r))) return q;
  }
  throw InvariantViolation("push_forward: no matching prime");
}

/// Lemma: Aut(L/K) acts transitively on the extensions of v.
inline bool galois_orbit_check(const ValuationHandle& v, const FieldEmbedding& emb, const Limits& limits = {}) {
  auto exts = extend_valuation(v, emb, limits);
  if (exts.empty()) return false;
  auto auts = relative_automorphisms(emb.target(), emb);
  std::vector<bool> hit(exts.size(), false);
  for (auto& s : auts) {
    auto img = push_forward(exts.front(), s, limits);
    auto it = std::find(exts.begin(), exts.end(), img);
    if (it == exts.end()) return false;
    hit[static_cast<std::size_t>(it - exts.begin())] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

/// Parses a handle on k. Besides the full serialization, `padic p=P` (when
/// v_p has one extension) and `padic p=P fp=..` (unique fingerprint) are
/// accepted, as is `padic p=P index=i` into the canonical sibling order.
inline ValuationHandle parse_valuation(const NumberField& k, const std::string& text, const Limits& limits = {}) {
  std::istringstream is(text);
  std::string kind;
  is >> kind;
  if (kind == "trivial") {
    std::string extra;
    if (is >> extra) throw ParseError("trivial handle takes no arguments");
    return ValuationHandle::trivial(k);
  }
  if (kind != "padic") throw ParseError("unknown valuation kind '" + kind + "'");
  std::map<std::string, std::string> kv;
  std::string tok;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value in valuation, got '" + tok + "'");
    static const std::set<std::string> keys{"p", "e", "f", "fp", "pin", "k", "index"};
    if (!keys.count(tok.substr(0, eq))) throw ParseError("unknown valuation key in '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  if (!kv.count("p")) throw ParseError("padic handle needs p=");
  std::int64_t p;
  try {
    p = std::stoll(kv["p"]);
  } catch (const std::logic_error&) {
    throw ParseError("malformed prime '" + kv["p"] + "'");
  }
  if (!is_prime(p)) throw ParseError("p=" + kv["p"] + " is not prime");
  auto sibs = padic_valuations(k, p, limits);
  std::vector<ValuationHandle> match;
  for (std::size_t i = 0; i < sibs.size(); ++i) {
    const auto& lp = *sibs[i].local();
    bool ok = true;
    if (kv.count("e") && kv["e"] != std::to_string(lp.e)) ok = false;
    if (kv.count("f") && kv["f"] != std::to_string(lp.f)) ok = false;
    if (kv.count("fp") && kv["fp"] != lp.fingerprint) ok = false;
    if (kv.count("pin") && kv["pin"] != padic::detail::hex_pin(lp.pin)) ok = false;
    if (kv.count("k") && kv["k"] != std::to_string(lp.pin_k)) ok = false;
    if (kv.count("index") && kv["index"] != std::to_string(i)) ok = false;
    if (ok) match.push_back(sibs[i]);
  }
  if (match.empty()) throw ParseError("no extension of v_" + std::to_string(p) + " to " + k.label() + " matches '" + text + "'");
  if (match.size() > 1)
    throw ParseError("'" + text + "' is ambiguous: " + std::to_string(match.size()) + " extensions match");
  return match.front();
}

}  // namespace tpval
