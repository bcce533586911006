#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tpval/formulas/parser.hpp"
#include "tpval/structures/extensions.hpp"

namespace tpval {

using Bindings = std::map<std::string, Element>;

/// Value of a term, or nullopt when a division by zero occurs.
inline std::optional<Element> eval_term(const FunctionField& k, const Term& t, const Bindings& vars, const Bindings& params) {
  using K = TermNode::Kind;
  switch (t->kind) {
    case K::Int: return k.constant(k.constants().from_rational(Rational(t->value)));
    case K::Var: {
      auto it = vars.find(t->name);
      if (it == vars.end()) throw PreconditionError("unbound variable '" + t->name + "'");
      return it->second;
    }
    case K::Param: {
      auto it = params.find(t->name);
      if (it == params.end()) throw PreconditionError("parameter $" + t->name + " is not bound");
      return it->second;
    }
    case K::Neg: {
      auto a = eval_term(k, t->lhs, vars, params);
      if (!a) return std::nullopt;
      return k.neg(*a);
    }
    case K::Pow: {
      auto a = eval_term(k, t->lhs, vars, params);
      if (!a) return std::nullopt;
      Element r = k.one(), b = *a;
      for (unsigned long e = t->exponent; e; e >>= 1) {
        if (e & 1) r = k.mul(r, b);
        if (e > 1) b = k.mul(b, b);
      }
      return r;
    }
    default: {
      auto a = eval_term(k, t->lhs, vars, params);
      auto b = eval_term(k, t->rhs, vars, params);
      if (!a || !b) return std::nullopt;
      switch (t->kind) {
        case K::Add: return k.add(*a, *b);
        case K::Sub: return k.sub(*a, *b);
        case K::Mul: return k.mul(*a, *b);
        default:
          if (k.is_zero(*b)) return std::nullopt;
          return k.div(*a, *b);
      }
    }
  }
}

/// Parses an element of `f`: a term in the constant generator `a` and, for
/// F(t), the variable `t`.
inline Element parse_element(const Field& f, const std::string& text) {
  Term t = parse_term(text);
  FunctionField k = f.arithmetic();
  Bindings names{{"a", k.constant(f.constants.generator())}};
  if (f.function_field) names.emplace("t", k.variable());
  std::set<std::string> vars, ps;
  term::collect(t, vars, ps);
  if (!ps.empty()) throw ParseError("parameters are not allowed in an element");
  for (auto& v : vars)
    if (!names.count(v)) throw ParseError("unknown name '" + v + "' in element (use a" +
                                          std::string(f.function_field ? " and t" : "") + ")");
  auto v = eval_term(k, t, names, {});
  if (!v) throw ParseError("division by zero in element");
  return *v;
}

inline std::string format_element(const Field& f, const Element& x) {
  return format_rational_function(f.arithmetic(), x, "t");
}

/// Image of an element of F(t) under the constant embedding F -> L.
inline Element map_element(const FieldEmbedding& emb, const Element& x) {
  FunctionField big(emb.target());
  return big.make(emb.apply(x.num), emb.apply(x.den));
}

inline Bindings map_bindings(const FieldEmbedding& emb, const Bindings& b) {
  Bindings out;
  for (auto& [n, x] : b) out.emplace(n, map_element(emb, x));
  return out;
}

/// Truth of φ in the structure. Atoms that divide by zero are false. Free
/// variables, if any, take their values from `vars`.
inline bool evaluate(const Formula& phi, const TP0Structure& s, const Bindings& params = {}, const Bindings& vars = {}) {
  FunctionField k = s.field().arithmetic();
  const NumberField& l = s.field().constants;
  auto node_index = [&](const std::string& n) {
    if (n == "_") return 0;
    if (!s.tree().contains(n)) throw PreconditionError("formula mentions unknown node '" + n + "'");
    return s.tree().index(n);
  };
  auto go = [&](auto&& self, const Formula& f, const Bindings& vars) -> bool {
    using K = FormulaNode::Kind;
    switch (f->kind) {
      case K::IsZero:
      case K::InO:
      case K::InM: {
        auto v = eval_term(k, f->term, vars, params);
        if (!v) return false;
        if (f->kind == K::IsZero) return k.is_zero(*v);
        Membership m = s.at(node_index(f->node)).membership(*v);
        return f->kind == K::InO ? m != Membership::OutsideRing : m == Membership::InMaximalIdeal;
      }
      case K::Not: return !self(self, f->lhs, vars);
      case K::And: return self(self, f->lhs, vars) && self(self, f->rhs, vars);
      case K::Or: return self(self, f->lhs, vars) || self(self, f->rhs, vars);
      case K::ExistsRoot: {
        KPoly q = to_kpoly(l, f->poly);
        auto roots = roots_in_field(l, q);
        int distinct = poly::degree<NumberField>(poly::squarefree_part_char0(l, q));
        if (static_cast<int>(roots.size()) != distinct)
          throw PreconditionError("binder polynomial " + format_qpoly(f->poly) + " does not split in " + l.label());
        for (auto& r : roots) {
          Bindings inner = vars;
          inner.insert_or_assign(f->var, k.constant(r));
          if (self(self, f->lhs, inner)) return true;
        }
        return false;
      }
    }
    return false;
  };
  return go(go, phi, vars);
}

/// A finite normal extension of the constants in which every binder
/// polynomial splits.
struct DeterminingExtension {
  TP0Structure base;
  NumberField field;
  FieldEmbedding embedding;  // constants of base -> field
  std::vector<QPoly> binder_polys;
};

/// Squarefree product of the distinct irreducible factors of the polys.
inline QPoly binder_product(const std::vector<QPoly>& polys) {
  std::vector<QPoly> irr;
  for (auto& q : polys)
    for (auto& [g, m] : factor_over_Q(q))
      if (std::find(irr.begin(), irr.end(), g) == irr.end()) irr.push_back(g);
  std::sort(irr.begin(), irr.end(), qpoly_less);
  QPoly prod{Rational(1)};
  for (auto& g : irr) prod = poly::mul(QQ, prod, g);
  return prod;
}

inline DeterminingExtension determining_extension(const Formula& phi, const TP0Structure& s, const Limits& limits = {}) {
  std::vector<QPoly> polys;
  formula::binder_polys(phi, polys);
  const NumberField& k = s.field().constants;
  QPoly prod = binder_product(polys);
  if (poly::degree<RationalField>(prod) < 1) return {s, k, FieldEmbedding::identity(k), polys};
  auto sf = splitting_field(k, to_kpoly(k, prod), limits);
  return {s, sf.field, sf.base, polys};
}

/// Do all the polynomials split in l?
inline bool splits_in(const NumberField& l, const std::vector<QPoly>& polys) {
  for (auto& q : polys) {
    KPoly g = to_kpoly(l, q);
    if (static_cast<int>(roots_in_field(l, g).size()) != poly::degree<NumberField>(poly::squarefree_part_char0(l, g)))
      return false;
  }
  return true;
}

}  // namespace tpval
