#pragma once

#include <string>
#include <variant>
#include <vector>

#include "tpval/function_fields/handles.hpp"
#include "tpval/io/text.hpp"

namespace tpval {

/// A supported field: a number field F, or the rational function field F(t).
/// Elements of either are stored as rational functions (constants for F).
struct Field {
  NumberField constants;
  bool function_field = false;

  static Field number(NumberField k) { return {std::move(k), false}; }
  static Field rational_functions(NumberField k) { return {std::move(k), true}; }

  std::string label() const { return constants.label() + (function_field ? "(t)" : ""); }
  FunctionField arithmetic() const { return FunctionField(constants); }

  /// Same kind of field over the image constants.
  Field over(const NumberField& k) const { return {k, function_field}; }

  /// `field [c0,...,1] name=<label> [function=t]`
  std::string serialize() const {
    std::string s = "field " + text::format_polylit(constants.minpoly()) + " name=" + constants.label();
    if (function_field) s += " function=t";
    return s;
  }

  /// Accepts the serialize() form, with `Q` allowed in place of the list.
  static Field parse(const std::string& line) {
    std::istringstream is(text::trim(line));
    std::string kw, poly;
    is >> kw;
    if (kw != "field") throw ParseError("field line must start with 'field'");
    std::getline(is, poly);
    poly = text::trim(poly);
    std::string rest;
    QPoly minpoly;
    if (text::starts_with(poly, "Q") && (poly.size() == 1 || poly[1] == ' ')) {
      minpoly = {Rational(0), Rational(1)};
      rest = poly.substr(1);
    } else {
      auto close = poly.find(']');
      if (close == std::string::npos) throw ParseError("field line needs a minimal polynomial [c0,...,1] or Q");
      minpoly = text::parse_polylit(poly.substr(0, close + 1));
      rest = poly.substr(close + 1);
    }
    std::string name = "K";
    bool ff = false;
    std::istringstream rs(rest);
    std::string tok;
    while (rs >> tok) {
      if (text::starts_with(tok, "name=")) {
        name = tok.substr(5);
      } else if (tok == "function=t") {
        ff = true;
      } else {
        throw ParseError("unknown field option '" + tok + "'");
      }
    }
    if (name.empty()) throw ParseError("empty field name");
    if (minpoly.size() == 2 && minpoly.back() == 1) return {NumberField::rationals(), ff};
    try {
      return {NumberField(minpoly, name), ff};
    } catch (const PreconditionError& e) {
      throw ParseError(e.what());
    }
  }

  friend bool operator==(const Field& a, const Field& b) {
    return a.function_field == b.function_field && a.constants == b.constants;
  }
  friend bool operator!=(const Field& a, const Field& b) { return !(a == b); }
};

using Element = FFElem;

/// A valuation ring from the supported family on a Field.
class Handle {
 public:
  Handle(ValuationHandle h) : h_(std::move(h)) {}  // NOLINT: implicit by design
  Handle(FFHandle h) : h_(std::move(h)) {}         // NOLINT

  static Handle trivial(const Field& f) {
    if (f.function_field) return FFHandle::trivial(f.constants);
    return ValuationHandle::trivial(f.constants);
  }

  bool is_function_field() const { return h_.index() == 1; }
  const ValuationHandle& number() const { return std::get<0>(h_); }
  const FFHandle& ff() const { return std::get<1>(h_); }

  Field field() const {
    if (is_function_field()) return Field::rational_functions(ff().constants());
    return Field::number(number().field());
  }
  bool is_trivial() const { return is_function_field() ? ff().is_trivial() : number().is_trivial(); }
  int rank() const { return is_function_field() ? ff().rank() : (number().is_trivial() ? 0 : 1); }

  /// 0 when the residue field has characteristic zero.
  std::int64_t residue_characteristic() const {
    return is_function_field() ? ff().base().prime() : number().prime();
  }

  Membership membership(const Element& x) const {
    if (is_function_field()) return ff().membership(x);
    if (x.num.empty()) return Membership::InMaximalIdeal;
    if (x.num.size() != 1 || x.den.size() != 1) throw PreconditionError("non-constant element given to a number-field valuation");
    return number().membership(number().field().mul(x.num[0], number().field().inv(x.den[0])));
  }

  /// Extensions along a constant-field embedding F -> L (or F(t) -> L(t)).
  std::vector<Handle> extensions(const FieldEmbedding& emb, const Limits& limits = {}) const {
    std::vector<Handle> out;
    if (is_function_field()) {
      for (auto& h : extend_ff(ff(), emb, limits)) out.emplace_back(h);
    } else {
      for (auto& h : extend_valuation(number(), emb, limits)) out.emplace_back(h);
    }
    return out;
  }

  Handle restrict(const FieldEmbedding& emb, const Limits& limits = {}) const {
    if (is_function_field()) return restrict_ff(ff(), emb, limits);
    return restrict_valuation(number(), emb, limits);
  }

  /// Restriction from F(t) to its constants F (identity on number fields).
  Handle to_constants() const {
    if (!is_function_field()) return *this;
    return ff().base();
  }

  std::string serialize() const { return is_function_field() ? ff().serialize() : number().serialize(); }

  static Handle parse(const Field& f, const std::string& text, const Limits& limits = {}) {
    if (f.function_field) return parse_ff_handle(f.constants, text, limits);
    return parse_valuation(f.constants, tpval::text::trim(text), limits);
  }

  friend bool operator==(const Handle& a, const Handle& b) {
    if (a.h_.index() != b.h_.index()) return false;
    return a.is_function_field() ? a.ff() == b.ff() : a.number() == b.number();
  }
  friend bool operator!=(const Handle& a, const Handle& b) { return !(a == b); }
  friend bool operator<(const Handle& a, const Handle& b) {
    if (a.h_.index() != b.h_.index()) return a.h_.index() < b.h_.index();
    return a.is_function_field() ? a.ff() < b.ff() : a.number() < b.number();
  }

 private:
  std::variant<ValuationHandle, FFHandle> h_;
};

/// O_big ⊇ O_small.
inline bool contains(const Handle& big, const Handle& small) {
  if (big.field() != small.field()) throw PreconditionError("containment of rings on different fields");
  if (big.is_function_field()) return contains(big.ff(), small.ff());
  // Distinct nontrivial rings on a number field are incomparable.
  return big.is_trivial() || big == small;
}

/// The smallest supported ring containing both.
inline Handle join(const Handle& a, const Handle& b) {
  if (a.field() != b.field()) throw PreconditionError("join of rings on different fields");
  if (a.is_function_field()) return join(a.ff(), b.ff());
  return a == b ? a : Handle::trivial(a.field());
}

}  // namespace tpval
