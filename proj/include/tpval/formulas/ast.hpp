#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tpval/algebra/rational_poly.hpp"
#include "tpval/errors.hpp"

namespace tpval {

// ---------------------------------------------------------------- terms

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  enum class Kind { Int, Var, Param, Neg, Add, Sub, Mul, Div, Pow };
  Kind kind;
  Integer value;       // Int: nonnegative literal
  std::string name;    // Var, Param
  Term lhs, rhs;       // Neg uses lhs; Pow uses lhs and exponent
  unsigned long exponent = 0;
};

namespace term {

inline Term make(TermNode n) { return std::make_shared<const TermNode>(std::move(n)); }
inline Term integer(Integer v) {
  if (v < 0) return make({TermNode::Kind::Neg, 0, "", make({TermNode::Kind::Int, -v, "", {}, {}, 0}), {}, 0});
  return make({TermNode::Kind::Int, std::move(v), "", {}, {}, 0});
}
inline Term var(std::string n) { return make({TermNode::Kind::Var, 0, std::move(n), {}, {}, 0}); }
inline Term param(std::string n) { return make({TermNode::Kind::Param, 0, std::move(n), {}, {}, 0}); }
inline Term neg(Term a) { return make({TermNode::Kind::Neg, 0, "", std::move(a), {}, 0}); }
inline Term binary(TermNode::Kind k, Term a, Term b) { return make({k, 0, "", std::move(a), std::move(b), 0}); }
inline Term add(Term a, Term b) { return binary(TermNode::Kind::Add, std::move(a), std::move(b)); }
inline Term sub(Term a, Term b) { return binary(TermNode::Kind::Sub, std::move(a), std::move(b)); }
inline Term mul(Term a, Term b) { return binary(TermNode::Kind::Mul, std::move(a), std::move(b)); }
inline Term div(Term a, Term b) { return binary(TermNode::Kind::Div, std::move(a), std::move(b)); }
inline Term pow(Term a, unsigned long e) { return make({TermNode::Kind::Pow, 0, "", std::move(a), {}, e}); }

inline bool equal(const Term& a, const Term& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  return a->value == b->value && a->name == b->name && a->exponent == b->exponent && equal(a->lhs, b->lhs) &&
         equal(a->rhs, b->rhs);
}

inline int precedence(const Term& t) {
  switch (t->kind) {
    case TermNode::Kind::Add:
    case TermNode::Kind::Sub: return 1;
    case TermNode::Kind::Mul:
    case TermNode::Kind::Div: return 2;
    case TermNode::Kind::Neg: return 3;
    case TermNode::Kind::Pow: return 4;
    default: return 5;
  }
}

inline std::string print(const Term& t) {
  auto wrap = [](const Term& c, bool need) { return need ? "(" + print(c) + ")" : print(c); };
  int p = precedence(t);
  switch (t->kind) {
    case TermNode::Kind::Int: return t->value.get_str();
    case TermNode::Kind::Var: return t->name;
    case TermNode::Kind::Param: return "$" + t->name;
    case TermNode::Kind::Neg: return "-" + wrap(t->lhs, precedence(t->lhs) < 3);
    case TermNode::Kind::Pow: return wrap(t->lhs, precedence(t->lhs) <= 4) + "^" + std::to_string(t->exponent);
    default: {
      const char* op = t->kind == TermNode::Kind::Add ? " + "
                       : t->kind == TermNode::Kind::Sub ? " - "
                       : t->kind == TermNode::Kind::Mul ? " * "
                                                        : " / ";
      return wrap(t->lhs, precedence(t->lhs) < p) + op + wrap(t->rhs, precedence(t->rhs) <= p);
    }
  }
}

inline void collect(const Term& t, std::set<std::string>& vars, std::set<std::string>& params) {
  if (!t) return;
  if (t->kind == TermNode::Kind::Var) vars.insert(t->name);
  if (t->kind == TermNode::Kind::Param) params.insert(t->name);
  collect(t->lhs, vars, params);
  collect(t->rhs, vars, params);
}

}  // namespace term

// ------------------------------------------------------------- formulas

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  enum class Kind { IsZero, InO, InM, Not, And, Or, ExistsRoot };
  Kind kind;
  Term term;             // atoms
  std::string node;      // InO, InM
  Formula lhs, rhs;      // Not uses lhs; ExistsRoot body is lhs
  std::string var;       // ExistsRoot
  QPoly poly;            // ExistsRoot: monic, over Q
};

namespace formula {

inline Formula make(FormulaNode n) { return std::make_shared<const FormulaNode>(std::move(n)); }
inline Formula is_zero(Term t) { return make({FormulaNode::Kind::IsZero, std::move(t), "", {}, {}, "", {}}); }
inline Formula in_O(Term t, std::string node) {
  return make({FormulaNode::Kind::InO, std::move(t), std::move(node), {}, {}, "", {}});
}
inline Formula in_m(Term t, std::string node) {
  return make({FormulaNode::Kind::InM, std::move(t), std::move(node), {}, {}, "", {}});
}
inline Formula negate(Formula a) { return make({FormulaNode::Kind::Not, {}, "", std::move(a), {}, "", {}}); }
inline Formula conj(Formula a, Formula b) { return make({FormulaNode::Kind::And, {}, "", std::move(a), std::move(b), "", {}}); }
inline Formula disj(Formula a, Formula b) { return make({FormulaNode::Kind::Or, {}, "", std::move(a), std::move(b), "", {}}); }
inline Formula exists_root(std::string var, QPoly q, Formula body) {
  if (q.empty() || q.size() < 2 || q.back() != 1) throw PreconditionError("binder polynomial must be monic of degree >= 1");
  return make({FormulaNode::Kind::ExistsRoot, {}, "", std::move(body), {}, std::move(var), std::move(q)});
}
inline Formula truth() { return is_zero(term::integer(0)); }
inline Formula falsity() { return is_zero(term::integer(1)); }

inline bool equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  return a->node == b->node && a->var == b->var && a->poly == b->poly && term::equal(a->term, b->term) &&
         equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

namespace detail {
// 0: binder, 1: |, 2: &, 3: ~, 4: atom
inline int level(const Formula& f) {
  switch (f->kind) {
    case FormulaNode::Kind::ExistsRoot: return 0;
    case FormulaNode::Kind::Or: return 1;
    case FormulaNode::Kind::And: return 2;
    case FormulaNode::Kind::Not: return 3;
    default: return 4;
  }
}
}  // namespace detail

/// Canonical text. A binder body extends as far right as possible, so a
/// binder is parenthesized whenever it is an operand.
inline std::string print(const Formula& f) {
  using detail::level;
  auto wrap = [](const Formula& c, bool need) { return need ? "(" + print(c) + ")" : print(c); };
  switch (f->kind) {
    case FormulaNode::Kind::IsZero: return term::print(f->term) + " = 0";
    case FormulaNode::Kind::InO: return term::print(f->term) + " in O[" + f->node + "]";
    case FormulaNode::Kind::InM: return term::print(f->term) + " in m[" + f->node + "]";
    case FormulaNode::Kind::Not: return "~" + wrap(f->lhs, level(f->lhs) < 3);
    case FormulaNode::Kind::And: return wrap(f->lhs, level(f->lhs) < 2) + " & " + wrap(f->rhs, level(f->rhs) <= 2);
    case FormulaNode::Kind::Or: return wrap(f->lhs, level(f->lhs) < 1) + " | " + wrap(f->rhs, level(f->rhs) <= 1);
    case FormulaNode::Kind::ExistsRoot:
      return "exists " + f->var + " root " + format_qpoly(f->poly) + " : " + print(f->lhs);
  }
  return "";
}

/// Binder polynomials in preorder.
inline void binder_polys(const Formula& f, std::vector<QPoly>& out) {
  if (!f) return;
  if (f->kind == FormulaNode::Kind::ExistsRoot) out.push_back(f->poly);
  binder_polys(f->lhs, out);
  binder_polys(f->rhs, out);
}

inline void nodes(const Formula& f, std::set<std::string>& out) {
  if (!f) return;
  if (f->kind == FormulaNode::Kind::InO || f->kind == FormulaNode::Kind::InM) out.insert(f->node);
  nodes(f->lhs, out);
  nodes(f->rhs, out);
}

inline void params(const Formula& f, std::set<std::string>& out) {
  if (!f) return;
  std::set<std::string> vars;
  if (f->term) term::collect(f->term, vars, out);
  params(f->lhs, out);
  params(f->rhs, out);
}

/// Variables occurring free (not bound by an enclosing binder).
inline void free_vars(const Formula& f, std::set<std::string>& out, std::set<std::string> bound = {}) {
  if (!f) return;
  if (f->term) {
    std::set<std::string> vars, ps;
    term::collect(f->term, vars, ps);
    for (auto& v : vars)
      if (!bound.count(v)) out.insert(v);
  }
  if (f->kind == FormulaNode::Kind::ExistsRoot) bound.insert(f->var);
  free_vars(f->lhs, out, bound);
  free_vars(f->rhs, out, bound);
}

inline bool is_quantifier_free(const Formula& f) {
  if (!f) return true;
  return f->kind != FormulaNode::Kind::ExistsRoot && is_quantifier_free(f->lhs) && is_quantifier_free(f->rhs);
}

inline Term substitute(const Term& t, const std::string& var, const Term& by) {
  if (!t) return t;
  if (t->kind == TermNode::Kind::Var && t->name == var) return by;
  if (!t->lhs && !t->rhs) return t;
  TermNode n = *t;
  n.lhs = substitute(t->lhs, var, by);
  n.rhs = substitute(t->rhs, var, by);
  return term::make(std::move(n));
}

/// Replaces the free occurrences of var by a term (which must not mention
/// variables bound in f).
inline Formula substitute(const Formula& f, const std::string& var, const Term& by) {
  if (!f) return f;
  if (f->kind == FormulaNode::Kind::ExistsRoot && f->var == var) return f;
  FormulaNode n = *f;
  n.term = substitute(f->term, var, by);
  n.lhs = substitute(f->lhs, var, by);
  n.rhs = substitute(f->rhs, var, by);
  return make(std::move(n));
}

/// Renames the nodes referenced by atoms; nodes missing from the map stay.
inline Formula rename_nodes(const Formula& f, const std::map<std::string, std::string>& m) {
  if (!f) return f;
  FormulaNode n = *f;
  if (auto it = m.find(n.node); !n.node.empty() && it != m.end()) n.node = it->second;
  n.lhs = rename_nodes(f->lhs, m);
  n.rhs = rename_nodes(f->rhs, m);
  return make(std::move(n));
}

}  // namespace formula
}  // namespace tpval
