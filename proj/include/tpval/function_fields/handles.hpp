#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "tpval/function_fields/rational_functions.hpp"
#include "tpval/valuation/padic.hpp"

namespace tpval {

/// A place of res O = k(t): a monic irreducible polynomial over k, or the
/// degree place at infinity. Coefficients live in `gf` when k is finite and
/// in `nf` when k is the number field itself (trivial base).
struct ResiduePlace {
  bool infinite = false;
  Poly<GaloisField> gf;
  KPoly nf;

  static ResiduePlace infinity() { return {true, {}, {}}; }
  static ResiduePlace finite(Poly<GaloisField> g) { return {false, std::move(g), {}}; }
  static ResiduePlace number(KPoly g) { return {false, {}, std::move(g)}; }

  int degree() const { return infinite ? 1 : static_cast<int>(std::max(gf.size(), nf.size())) - 1; }
  friend bool operator==(const ResiduePlace&, const ResiduePlace&) = default;
};

/// An element of res O: over F_q for a p-adic base, over F for the trivial one.
using ResidueFunction = std::variant<ResidueFunctionField::Elem, FFElem>;

namespace ff::detail {

template <FieldContext C>
int place_order(const typename RationalFunctionField<C>::Elem& x, const C& k, const ResiduePlace& place,
                const Poly<C>& g) {
  if (x.num.empty()) throw PreconditionError("order of zero at a place");
  if (place.infinite) return poly::degree<C>(x.den) - poly::degree<C>(x.num);
  return multiplicity(k, x.num, g) - multiplicity(k, x.den, g);
}

inline std::string format_place(const ResiduePlace& pl, const std::optional<GaloisField>& gf) {
  if (pl.infinite) return "inf";
  std::ostringstream os;
  os << "[";
  if (gf) {
    for (std::size_t i = 0; i < pl.gf.size(); ++i) os << (i ? "," : "") << gf->format(pl.gf[i]);
  } else {
    for (std::size_t i = 0; i < pl.nf.size(); ++i) {
      os << (i ? "," : "");
      const auto& c = pl.nf[i];
      if (c.empty()) os << "0";
      for (std::size_t j = 0; j < c.size(); ++j) os << (j ? ":" : "") << c[j].get_str();
    }
  }
  os << "]";
  return os.str();
}

}  // namespace ff::detail

/// A valuation ring on F(t) from the supported family: the Gauss extension
/// of a ring on F (the trivial ring on F(t) when the base is trivial), or a
/// composed ring O' inside such a Gauss ring O, fixed by a place of res O.
class FFHandle {
 public:
  enum class Kind { Gauss, Composed };

  static FFHandle gauss(const ValuationHandle& base) { return FFHandle(Kind::Gauss, base, {}); }
  static FFHandle trivial(const NumberField& k) { return gauss(ValuationHandle::trivial(k)); }

  /// Validates that place is monic irreducible over the residue constants.
  static FFHandle composed(const ValuationHandle& base, ResiduePlace place) {
    FFHandle h(Kind::Composed, base, std::move(place));
    const auto& pl = h.place_;
    if (pl.infinite) {
      if (!pl.gf.empty() || !pl.nf.empty()) throw PreconditionError("place at infinity carries a polynomial");
      return h;
    }
    if (base.is_trivial()) {
      const NumberField& k = base.field();
      if (!pl.gf.empty() || pl.nf.size() < 2 || !k.equal(pl.nf.back(), k.one()))
        throw PreconditionError("place must be a monic polynomial of positive degree over " + k.label());
      for (const auto& c : pl.nf)
        if (c != k.reduce(c)) throw PreconditionError("place coefficient not reduced in " + k.label());
      if (!is_irreducible_over(k, pl.nf)) throw PreconditionError("place polynomial is reducible over " + k.label());
    } else {
      const GaloisField& k = *h.gf_;
      if (!pl.nf.empty() || pl.gf.size() < 2 || !k.equal(pl.gf.back(), k.one()))
        throw PreconditionError("place must be a monic polynomial of positive degree over the residue field");
      for (const auto& c : pl.gf)
        if (static_cast<int>(c.size()) != k.degree()) throw PreconditionError("place coefficient from the wrong field");
      if (!is_irreducible_finite(k, pl.gf)) throw PreconditionError("place polynomial is reducible over F_q");
    }
    return h;
  }

  Kind kind() const { return kind_; }
  bool is_gauss() const { return kind_ == Kind::Gauss; }
  bool is_composed() const { return kind_ == Kind::Composed; }
  bool is_trivial() const { return is_gauss() && base_.is_trivial(); }
  const ValuationHandle& base() const { return base_; }
  const ResiduePlace& place() const { return place_; }
  const NumberField& constants() const { return base_.field(); }
  FunctionField field() const { return FunctionField(base_.field()); }
  FFHandle coarse() const { return gauss(base_); }
  int rank() const { return (base_.is_trivial() ? 0 : 1) + (is_composed() ? 1 : 0); }
  /// F_q when the base is p-adic.
  const std::optional<GaloisField>& residue_constants() const { return gf_; }

  /// min_i w(a_i) for a polynomial in t.
  ValueVec gauss_value(const KPoly& p) const {
    if (p.empty()) return ValueVec::infinity();
    std::optional<ValueVec> best;
    for (const auto& c : p) {
      if (c.empty()) continue;
      auto v = base_.value(c);
      if (!best || v < *best) best = v;
    }
    return *best;
  }
  ValueVec gauss_value(const FFElem& x) const {
    if (x.num.empty()) return ValueVec::infinity();
    return gauss_value(x.num) + -gauss_value(x.den);
  }

  /// (Gauss value, order of the normalized residue at the place) for a
  /// composed handle, the Gauss value alone otherwise.
  ValueVec value(const FFElem& x) const {
    if (!is_composed()) return gauss_value(x);
    if (x.num.empty()) return ValueVec::infinity(2);
    ValueVec v = gauss_value(x);
    FunctionField ff = field();
    // Dividing by a constant of the same value leaves the fine order alone:
    // constants have order 0 at every place of res O.
    auto c = base_.field().mul(pivot(x.num), base_.field().inv(pivot(x.den)));
    auto r = residue(ff.mul(x, ff.constant(base_.field().inv(c))));
    return ValueVec::of({v.entries[0], Rational(fine_order(r))});
  }

  Membership membership(const FFElem& x) const { return membership_of(value(x)); }
  bool in_ring(const FFElem& x) const { return membership(x) != Membership::OutsideRing; }

  /// Image in res O of an element of Gauss value >= 0 (Gauss residue map).
  ResidueFunction residue(const FFElem& x) const {
    if (base_.is_trivial()) return x;
    ResidueFunctionField rf(*gf_);
    if (x.num.empty()) return rf.zero();
    auto v = gauss_value(x);
    if (v.sign() < 0) throw PreconditionError("residue: element is outside the Gauss ring");
    if (v.sign() > 0) return rf.zero();
    const NumberField& k = base_.field();
    QPoly cn = pivot(x.num), cd = pivot(x.den);
    auto s = base_.residue_finite(k.mul(cn, k.inv(cd)));
    auto num = residue_poly(x.num, cn), den = residue_poly(x.den, cd);
    return rf.make(poly::scale(*gf_, num, s), den);
  }

  /// Order of a nonzero residue at this handle's place.
  int fine_order(const ResidueFunction& r) const {
    if (!is_composed()) throw PreconditionError("fine_order needs a composed handle");
    if (gf_) return ff::detail::place_order<GaloisField>(std::get<0>(r), *gf_, place_, place_.gf);
    return ff::detail::place_order<NumberField>(std::get<1>(r), base_.field(), place_, place_.nf);
  }

  std::string serialize() const {
    if (is_gauss()) return "gauss base=" + base_.serialize();
    return "composed coarse=" + coarse().serialize() + " place=" + ff::detail::format_place(place_, gf_);
  }

  friend bool operator==(const FFHandle& a, const FFHandle& b) {
    return a.kind_ == b.kind_ && a.base_ == b.base_ && a.place_ == b.place_;
  }
  friend bool operator!=(const FFHandle& a, const FFHandle& b) { return !(a == b); }

  /// Canonical order: by base, Gauss before composed, then places by degree
  /// and coefficients, infinity last.
  friend bool operator<(const FFHandle& a, const FFHandle& b) {
    if (a.base_ != b.base_) return a.base_ < b.base_;
    if (a.kind_ != b.kind_) return a.is_gauss();
    if (a.is_gauss()) return false;
    const auto &x = a.place_, &y = b.place_;
    if (x.infinite != y.infinite) return y.infinite;
    if (x.infinite) return false;
    if (a.gf_) return tpval::detail::poly_less(*a.gf_, x.gf, y.gf);
    return kpoly_less(x.nf, y.nf);
  }

 private:
  FFHandle(Kind kind, ValuationHandle base, ResiduePlace place)
      : kind_(kind), base_(std::move(base)), place_(std::move(place)) {
    if (!base_.is_trivial()) gf_ = base_.residue_field().finite();
  }

  // First coefficient of least value.
  QPoly pivot(const KPoly& p) const {
    std::optional<ValueVec> best;
    QPoly c;
    for (const auto& a : p) {
      if (a.empty()) continue;
      auto v = base_.value(a);
      if (!best || v < *best) {
        best = v;
        c = a;
      }
    }
    return c;
  }

  Poly<GaloisField> residue_poly(const KPoly& p, const QPoly& c) const {
    const NumberField& k = base_.field();
    auto ci = k.inv(c);
    Poly<GaloisField> r;
    for (const auto& a : p) r.push_back(a.empty() ? gf_->zero() : base_.residue_finite(k.mul(a, ci)));
    poly::trim(*gf_, r);
    return r;
  }

  Kind kind_;
  ValuationHandle base_;
  ResiduePlace place_;
  std::optional<GaloisField> gf_;
};

// ---------------------------------------------------------------------------
// Residue valuations: the quotient O' / O.

/// A valuation ring on res O: trivial, or the ring of a place.
struct ResidueValuation {
  FFHandle coarse;
  std::optional<ResiduePlace> place;

  Membership membership(const ResidueFunction& x) const {
    bool zero = std::visit([](const auto& e) { return e.num.empty(); }, x);
    if (zero) return Membership::InMaximalIdeal;
    if (!place) return Membership::Unit;
    int o = FFHandle::composed(coarse.base(), *place).fine_order(x);
    return o > 0 ? Membership::InMaximalIdeal : (o == 0 ? Membership::Unit : Membership::OutsideRing);
  }

  std::string describe() const {
    std::string k = coarse.residue_constants()
                        ? "F_" + coarse.residue_constants()->size().get_str() + "(t)"
                        : coarse.constants().label() + "(t)";
    if (!place) return "trivial on " + k;
    if (place->infinite) return "degree valuation on " + k;
    std::string g = coarse.residue_constants()
                        ? format_rational_function(ResidueFunctionField(*coarse.residue_constants()),
                                                   ResidueFunctionField::Elem{place->gf, {coarse.residue_constants()->one()}})
                        : format_rational_function(FunctionField(coarse.constants()), FFElem{place->nf, {QPoly{1}}});
    return "(" + g + ")-adic on " + k;
  }
};

/// O' ÷ O for O the Gauss ring underneath fine.
inline ResidueValuation div_valuation(const FFHandle& fine) {
  if (fine.is_gauss()) return {fine, std::nullopt};
  return {fine.coarse(), fine.place()};
}

/// The ring whose quotient by coarse is r; inverse to div_valuation.
inline FFHandle compose(const ResidueValuation& r) {
  if (!r.coarse.is_gauss()) throw PreconditionError("compose: coarse handle must be a Gauss handle");
  if (!r.place) return r.coarse;
  return FFHandle::composed(r.coarse.base(), *r.place);
}

// ---------------------------------------------------------------------------
// Constant-field extensions F(t) -> L(t).

/// The embedding res(w) -> res(w') induced by emb, for w' over w (both p-adic).
class ResidueMap {
 public:
  ResidueMap(const ValuationHandle& w, const ValuationHandle& wp, const FieldEmbedding& emb)
      : source_(w.residue_field().finite()), target_(wp.residue_field().finite()) {
    auto x = source_.from_poly(FpPoly{0, 1});
    image_ = wp.residue_finite(emb.apply(w.lift(x)));
    if (!target_.is_zero(poly::eval(target_, lift_to_gf(target_, source_.modulus()), image_)))
      throw InvariantViolation("residue map: image is not a root of the residue modulus");
  }

  const GaloisField& source() const { return source_; }
  const GaloisField& target() const { return target_; }

  GaloisField::Elem apply(const GaloisField::Elem& c) const {
    return poly::eval(target_, lift_to_gf(target_, source_.to_poly(c)), image_);
  }
  Poly<GaloisField> apply(const Poly<GaloisField>& p) const {
    Poly<GaloisField> r;
    for (const auto& c : p) r.push_back(apply(c));
    poly::trim(target_, r);
    return r;
  }

  std::optional<GaloisField::Elem> preimage(const GaloisField::Elem& y) const {
    const PrimeField& fp = source_.prime_field();
    int f = source_.degree(), g = target_.degree();
    linalg::Matrix<PrimeField> a(static_cast<std::size_t>(g), std::vector<std::int64_t>(f, 0));
    auto power = target_.one();
    for (int j = 0; j < f; ++j) {
      for (int i = 0; i < g; ++i) a[i][j] = power[i];
      power = target_.mul(power, image_);
    }
    auto sol = linalg::solve(fp, a, std::vector<std::int64_t>(y.begin(), y.end()));
    if (!sol) return std::nullopt;
    return source_.from_poly(FpPoly(sol->begin(), sol->end()));
  }

 private:
  GaloisField source_, target_;
  GaloisField::Elem image_;
};

/// Every extension of the Gauss handle v to L(t) for L = emb.target(),
/// normal over F = emb.source().
inline std::vector<FFHandle> gauss_extend(const FFHandle& v, const FieldEmbedding& emb, const Limits& limits = {}) {
  if (!v.is_gauss()) throw PreconditionError("gauss_extend needs a Gauss handle");
  relative_automorphisms(emb.target(), emb);  // rejects non-normal extensions
  std::vector<FFHandle> out;
  for (auto& w : extend_valuation(v.base(), emb, limits)) out.push_back(FFHandle::gauss(w));
  std::sort(out.begin(), out.end());
  return out;
}

namespace ff::detail {

inline void check_over(const FFHandle& fine, const FFHandle& chosen, const FieldEmbedding& emb, const Limits& limits) {
  if (!chosen.is_gauss() || chosen.constants() != emb.target())
    throw PreconditionError("chosen coarse extension must be a Gauss handle on the target field");
  if (restrict_valuation(chosen.base(), emb, limits) != fine.base())
    throw PreconditionError("chosen coarse extension does not lie over the coarse handle");
}

// Monic irreducible factors of the image of the place polynomial in res(chosen).
inline std::vector<ResiduePlace> lifted_places(const FFHandle& fine, const FFHandle& chosen, const FieldEmbedding& emb) {
  std::vector<ResiduePlace> out;
  if (fine.place().infinite) return {ResiduePlace::infinity()};
  if (fine.base().is_trivial()) {
    for (auto& [h, m] : factor_over_field(emb.target(), emb.apply(fine.place().nf)))
      out.push_back(ResiduePlace::number(poly::monic(emb.target(), h)));
    return out;
  }
  ResidueMap j(fine.base(), chosen.base(), emb);
  for (auto& fac : factor_finite(j.target(), j.apply(fine.place().gf))) out.push_back(ResiduePlace::finite(fac.factor));
  return out;
}

}  // namespace ff::detail

/// Number of extensions of the fine handle lying over a fixed extension
/// `chosen` of its coarse Gauss handle: the number of places of res(chosen)
/// above the place of fine.
inline std::size_t count_fine_extensions(const FFHandle& fine, const FieldEmbedding& emb, const FFHandle& chosen,
                                         const Limits& limits = {}) {
  ff::detail::check_over(fine, chosen, emb, limits);
  if (fine.is_gauss()) return 1;
  return ff::detail::lifted_places(fine, chosen, emb).size();
}

/// All extensions of a supported handle to L(t), canonically ordered.
inline std::vector<FFHandle> extend_ff(const FFHandle& h, const FieldEmbedding& emb, const Limits& limits = {}) {
  auto coarse = gauss_extend(h.coarse(), emb, limits);
  if (h.is_gauss()) return coarse;
  std::vector<FFHandle> out;
  for (auto& c : coarse)
    for (auto& pl : ff::detail::lifted_places(h, c, emb)) out.push_back(FFHandle::composed(c.base(), pl));
  std::sort(out.begin(), out.end());
  return out;
}

/// The restriction to F(t) of a handle on L(t), for L normal over F.
inline FFHandle restrict_ff(const FFHandle& h, const FieldEmbedding& emb, const Limits& limits = {}) {
  if (h.constants() != emb.target()) throw PreconditionError("restrict: handle is not on the target field");
  auto w = restrict_valuation(h.base(), emb, limits);
  if (h.is_gauss()) return FFHandle::gauss(w);
  if (h.place().infinite) return FFHandle::composed(w, ResiduePlace::infinity());
  if (w.is_trivial()) {
    const NumberField& l = emb.target();
    std::vector<KPoly> conj;
    for (auto& s : relative_automorphisms(l, emb)) {
      auto c = s.apply(h.place().nf);
      if (std::find(conj.begin(), conj.end(), c) == conj.end()) conj.push_back(c);
    }
    KPoly prod{l.one()};
    for (auto& c : conj) prod = poly::mul(l, prod, c);
    KPoly g;
    for (auto& c : prod) {
      auto pre = emb.preimage(c);
      if (!pre) throw InvariantViolation("restrict: conjugate product not defined over the base");
      g.push_back(*pre);
    }
    return FFHandle::composed(w, ResiduePlace::number(g));
  }
  ResidueMap j(w, h.base(), emb);
  const GaloisField& big = j.target();
  Integer q = j.source().size();
  std::vector<Poly<GaloisField>> conj{h.place().gf};
  while (true) {
    Poly<GaloisField> next;
    for (auto& c : conj.back()) next.push_back(big.pow(c, q));
    if (next == conj.front()) break;
    conj.push_back(next);
  }
  Poly<GaloisField> prod{big.one()};
  for (auto& c : conj) prod = poly::mul(big, prod, c);
  Poly<GaloisField> g;
  for (auto& c : prod) {
    auto pre = j.preimage(c);
    if (!pre) throw InvariantViolation("restrict: Frobenius orbit product not defined over the residue field");
    g.push_back(*pre);
  }
  return FFHandle::composed(w, ResiduePlace::finite(g));
}

// ---------------------------------------------------------------------------
// The ring order and joins.

/// The overrings of h within the family, from h up to the trivial ring.
inline std::vector<FFHandle> overrings(const FFHandle& h) {
  std::vector<FFHandle> out{h};
  if (h.is_composed()) out.push_back(h.coarse());
  if (!h.base().is_trivial()) out.push_back(FFHandle::trivial(h.constants()));
  return out;
}

/// O_big ⊇ O_small.
inline bool contains(const FFHandle& big, const FFHandle& small) {
  if (big.constants() != small.constants()) throw PreconditionError("containment of rings on different fields");
  auto up = overrings(small);
  return std::find(up.begin(), up.end(), big) != up.end();
}

/// The smallest ring of the family containing both.
inline FFHandle join(const FFHandle& a, const FFHandle& b) {
  if (a.constants() != b.constants()) throw PreconditionError("join of rings on different fields");
  auto up = overrings(b);
  for (auto& h : overrings(a))
    if (std::find(up.begin(), up.end(), h) != up.end()) return h;
  throw InvariantViolation("join: no common overring");
}

// ---------------------------------------------------------------------------
// Text form.

namespace ff::detail {

inline ResiduePlace parse_place(const FFHandle& coarse, const std::string& text) {
  if (text == "inf") return ResiduePlace::infinity();
  if (text.size() < 2 || text.front() != '[' || text.back() != ']')
    throw ParseError("place must be 'inf' or a coefficient list like [3,0,1], got '" + text + "'");
  std::vector<std::string> parts;
  std::istringstream is(text.substr(1, text.size() - 2));
  std::string part;
  while (std::getline(is, part, ',')) parts.push_back(part);
  if (const auto& gf = coarse.residue_constants()) {
    Poly<GaloisField> g;
    for (auto& s : parts) g.push_back(gf->parse(s));
    poly::trim(*gf, g);
    return ResiduePlace::finite(g);
  }
  const NumberField& k = coarse.constants();
  KPoly g;
  for (auto& s : parts) {
    QPoly c;
    std::istringstream cs(s);
    std::string digit;
    try {
      while (std::getline(cs, digit, ':')) {
        Rational q(digit);
        q.canonicalize();
        c.push_back(q);
      }
    } catch (const std::invalid_argument&) {
      throw ParseError("malformed place coefficient '" + s + "'");
    }
    poly::trim(QQ, c);
    g.push_back(k.reduce(c));
  }
  poly::trim(k, g);
  return ResiduePlace::number(g);
}

}  // namespace ff::detail

/// Parses `trivial`, `gauss base=<handle on F>` or
/// `composed coarse=<gauss handle> place=<[c0,c1,..] | inf>`.
inline FFHandle parse_ff_handle(const NumberField& constants, const std::string& text, const Limits& limits = {}) {
  auto strip = [](std::string s) {
    auto a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  std::string t = strip(text);
  if (t == "trivial") return FFHandle::trivial(constants);
  const std::string g = "gauss base=", c = "composed coarse=";
  if (t.rfind(g, 0) == 0) return FFHandle::gauss(parse_valuation(constants, t.substr(g.size()), limits));
  if (t.rfind(c, 0) == 0) {
    auto at = t.rfind(" place=");
    if (at == std::string::npos) throw ParseError("composed handle without place=: '" + t + "'");
    auto coarse = parse_ff_handle(constants, t.substr(c.size(), at - c.size()), limits);
    if (!coarse.is_gauss()) throw ParseError("composed handle needs a Gauss coarse handle");
    auto place = ff::detail::parse_place(coarse, strip(t.substr(at + 7)));
    try {
      return FFHandle::composed(coarse.base(), place);
    } catch (const PreconditionError& e) {
      throw ParseError(e.what());
    }
  }
  throw ParseError("unknown function-field handle '" + t + "'");
}

}  // namespace tpval
