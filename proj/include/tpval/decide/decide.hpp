#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tpval/measure/measure.hpp"

namespace tpval {

/// ∃x Q(x) = 0 ∧ R_1(x) ∧ ... ∧ R_n(x), with R_i quantifier-free in x and
/// mentioning only the ring at node a_i.
struct PsiSentence {
  QPoly q;
  std::map<std::string, Formula> conditions;

  void validate() const {
    if (q.size() < 2 || q.back() != 1) throw PreconditionError("sentence: Q must be monic of degree >= 1");
    if (!is_irreducible_over_Q(q)) throw PreconditionError("sentence: Q = " + format_qpoly(q) + " is not irreducible");
    for (auto& [a, r] : conditions) {
      if (!formula::is_quantifier_free(r)) throw PreconditionError("sentence: condition at '" + a + "' has a quantifier");
      std::set<std::string> ps, ns, free;
      formula::params(r, ps);
      if (!ps.empty()) throw PreconditionError("sentence: condition at '" + a + "' has parameters");
      formula::nodes(r, ns);
      for (auto& n : ns)
        if (n != a)
          throw PreconditionError("sentence: condition at '" + a + "' mentions node '" + n +
                                  "'; mixed-node conditions are not decided");
      formula::free_vars(r, free);
      for (auto& v : free)
        if (v != "x") throw PreconditionError("sentence: condition at '" + a + "' has free variable '" + v + "'");
    }
  }

  /// The sentence as one formula: a single root satisfying every condition.
  Formula as_formula() const {
    Formula body = formula::truth();
    bool first = true;
    for (auto& [a, r] : conditions) {
      body = first ? r : formula::conj(body, r);
      first = false;
    }
    return formula::exists_root("x", q, body);
  }
};

/// A sentence file with its tree and characteristic function.
struct SentenceFile {
  PsiSentence sentence;
  FiniteTree tree;
  CharFunction chi;
};

/// `Q: [c0,...,1]`, then `node <a> char <p> : <formula in x>` lines and an
/// optional `tree ... end` block. Without a tree block the tree is flat over
/// the listed nodes. Nodes not listed get the characteristic of the listed
/// node below them, or 0.
inline SentenceFile parse_sentence_file(const std::string& text) {
  std::istringstream is(text);
  std::string line, tree_text;
  std::optional<QPoly> q;
  bool have_tree = false, in_tree = false;
  struct Cond {
    std::string node;
    std::int64_t p;
    std::string text;
    int line;
  };
  std::vector<Cond> conds;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = text::trim(text::strip_comment(line));
    if (t.empty()) continue;
    if (in_tree) {
      if (t == "end") in_tree = false;
      else tree_text += t + "\n";
    } else if (t == "tree") {
      if (have_tree) throw ParseError("sentence: second tree block", lineno, 1);
      have_tree = in_tree = true;
    } else if (text::starts_with(t, "Q:")) {
      if (q) throw ParseError("sentence: second Q line", lineno, 1);
      try {
        q = text::parse_polylit(t.substr(2));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), lineno, 3);
      }
    } else if (text::starts_with(t, "node ")) {
      auto colon = t.find(':');
      if (colon == std::string::npos) throw ParseError("sentence: expected 'node <a> char <p> : <formula>'", lineno, 1);
      std::istringstream hs(t.substr(5, colon - 5));
      std::string name, kw, extra;
      long long p = -1;
      if (!(hs >> name >> kw >> p) || kw != "char" || (hs >> extra))
        throw ParseError("sentence: expected 'node <a> char <p> : <formula>'", lineno, 1);
      if (p <= 0 || !is_prime(static_cast<std::int64_t>(p)))
        throw ParseError("sentence: characteristic must be a prime", lineno, 1);
      conds.push_back({name, static_cast<std::int64_t>(p), t.substr(colon + 1), lineno});
    } else {
      throw ParseError("sentence: unexpected line '" + t + "'", lineno, 1);
    }
  }
  if (in_tree) throw ParseError("sentence: unterminated tree block");
  if (!q) throw ParseError("sentence: missing 'Q:' line");
  if (q->size() < 2 || q->back() != 1) throw ParseError("sentence: Q must be monic of degree >= 1");
  SentenceFile out{{*q, {}}, FiniteTree(), CharFunction()};
  if (have_tree) {
    out.tree = FiniteTree::parse(tree_text);
  } else {
    std::vector<std::string> names;
    for (auto& c : conds) names.push_back(c.node);
    try {
      out.tree = FiniteTree::flat(names);
    } catch (const PreconditionError& e) {
      throw ParseError(std::string("sentence: ") + e.what());
    }
  }
  std::map<std::string, std::int64_t> listed;
  for (auto& c : conds) {
    if (!out.tree.contains(c.node)) throw ParseError("sentence: unknown node '" + c.node + "'", c.line, 1);
    if (!listed.emplace(c.node, c.p).second) throw ParseError("sentence: node '" + c.node + "' listed twice", c.line, 1);
    try {
      out.sentence.conditions.emplace(c.node, parse_formula(c.text, &out.tree, {"x"}));
    } catch (const ParseError& e) {
      throw ParseError(std::string("sentence: ") + e.what(), c.line, 1);
    }
  }
  for (int i : out.tree.order()) {
    const std::string& n = out.tree.name(i);
    std::int64_t p = 0;
    if (auto it = listed.find(n); it != listed.end()) p = it->second;
    else if (i != 0) p = out.chi.at(out.tree.name(out.tree.parent(i)));
    out.chi.set(n, p);
  }
  return out;
}

struct NodeWitness {
  std::size_t valuation_index;  // into padic_valuations(L, p)
  std::string valuation;        // its serialized form
  std::size_t root_index;       // into the sorted roots of Q in L
};

struct NodeVerdict {
  std::int64_t p = 0;
  bool satisfiable = false;
  std::optional<NodeWitness> witness;
};

struct ConsistencyVerdict {
  bool consistent = false;
  bool degenerate = false;  // χ(⊥) > 0: every ring is trivial
  std::map<std::string, NodeVerdict> per_node;
  NumberField field;              // splitting field of Q (char 0 case)
  std::vector<QPoly> roots;       // sorted roots of Q in field
  std::optional<TP0Structure> witness_structure;
};

namespace decide_detail {

/// Term value over a finite field, nullopt on division by zero.
template <FieldContext F>
std::optional<typename F::Elem> eval_finite(const F& k, std::int64_t p, const Term& t, const typename F::Elem& x) {
  using K = TermNode::Kind;
  switch (t->kind) {
    case K::Int: return k.from_int(static_cast<long>(pmod(t->value, Integer(static_cast<long>(p))).get_si()));
    case K::Var: return x;
    case K::Param: throw PreconditionError("parameters are not allowed in a sentence");
    case K::Neg: {
      auto a = eval_finite(k, p, t->lhs, x);
      if (!a) return std::nullopt;
      return k.neg(*a);
    }
    case K::Pow: {
      auto a = eval_finite(k, p, t->lhs, x);
      if (!a) return std::nullopt;
      auto r = k.one();
      for (unsigned long e = 0; e < t->exponent; ++e) r = k.mul(r, *a);
      return r;
    }
    default: {
      auto a = eval_finite(k, p, t->lhs, x), b = eval_finite(k, p, t->rhs, x);
      if (!a || !b) return std::nullopt;
      switch (t->kind) {
        case K::Add: return k.add(*a, *b);
        case K::Sub: return k.sub(*a, *b);
        case K::Mul: return k.mul(*a, *b);
        default:
          if (k.is_zero(*b)) return std::nullopt;
          return k.mul(*a, k.inv(*b));
      }
    }
  }
}

/// Truth of a quantifier-free condition at x in F_p^alg with every ring
/// trivial: O is everything, m is {0}.
template <FieldContext F>
bool eval_trivial(const F& k, std::int64_t p, const Formula& f, const typename F::Elem& x) {
  using K = FormulaNode::Kind;
  switch (f->kind) {
    case K::IsZero:
    case K::InO:
    case K::InM: {
      auto v = eval_finite(k, p, f->term, x);
      if (!v) return false;
      if (f->kind == K::InO) return true;
      return k.is_zero(*v);
    }
    case K::Not: return !eval_trivial(k, p, f->lhs, x);
    case K::And: return eval_trivial(k, p, f->lhs, x) && eval_trivial(k, p, f->rhs, x);
    case K::Or: return eval_trivial(k, p, f->lhs, x) || eval_trivial(k, p, f->rhs, x);
    default: throw PreconditionError("quantifier in a sentence condition");
  }
}

inline ConsistencyVerdict decide_degenerate(const PsiSentence& psi, std::int64_t p) {
  ConsistencyVerdict v;
  v.degenerate = true;
  PrimeField fp(p);
  FpPoly qbar;
  for (auto& c : psi.q) {
    if (vp(c, static_cast<unsigned long>(p)) < 0)
      throw PreconditionError("sentence: Q is not " + std::to_string(p) + "-integral");
    qbar.push_back(fp.from_integer(rational_mod(c, Integer(static_cast<long>(p)))));
  }
  int d = 1;
  for (auto& fac : factor_finite(fp, qbar)) d = std::lcm(d, poly::degree<PrimeField>(fac.factor));
  GaloisField k(p, d);
  auto roots = roots_finite(k, lift_to_gf(k, qbar));
  bool any = false;
  for (auto& r : roots) {
    bool all = true;
    for (auto& [a, cond] : psi.conditions) all = all && eval_trivial(k, p, cond, r);
    any = any || all;
  }
  v.consistent = any;
  for (auto& [a, cond] : psi.conditions) v.per_node[a] = {p, any, std::nullopt};
  return v;
}

}  // namespace decide_detail

/// Rings at the a_i after moving each witness root to the first root.
inline TP0Structure build_witness(const ConsistencyVerdict& verdict, const FiniteTree& tree, const CharFunction& chi,
                                  const Limits& limits = {}) {
  if (!verdict.consistent) throw PreconditionError("build_witness: the sentence is inconsistent");
  Field f = Field::number(verdict.field);
  if (verdict.degenerate)
    throw PreconditionError("build_witness: no char-0 witness when the bottom has positive characteristic");
  const QPoly& alpha = verdict.roots.front();
  auto autos = automorphisms(verdict.field);
  std::map<std::string, Handle> minimal;
  for (auto& [a, nv] : verdict.per_node) {
    const NodeWitness& w = *nv.witness;
    auto ws = padic_valuations(verdict.field, nv.p, limits);
    const QPoly& r = verdict.roots.at(w.root_index);
    std::optional<FieldEmbedding> sigma;
    for (auto& s : autos)
      if (s.apply(r) == alpha) {
        sigma = s;
        break;
      }
    if (!sigma) throw InvariantViolation("build_witness: no automorphism moves the witness root to the first root");
    minimal.emplace(a, push_forward(ws.at(w.valuation_index), *sigma, limits));
  }
  return complete_from_minimal(tree, f, chi, minimal);
}

inline ConsistencyVerdict decide_psi(const PsiSentence& psi, const FiniteTree& tree, const CharFunction& chi,
                                     const Limits& limits = {}) {
  psi.validate();
  chi.validate(tree);
  if (std::int64_t p0 = chi.at(tree.bottom()); p0 != 0) {
    for (auto& [a, cond] : psi.conditions)
      if (!tree.contains(a)) throw PreconditionError("sentence: unknown node '" + a + "'");
    return decide_detail::decide_degenerate(psi, p0);
  }
  auto mins = chi.minimal_positive(tree);
  for (auto& [a, cond] : psi.conditions)
    if (std::find(mins.begin(), mins.end(), a) == mins.end())
      throw PreconditionError("sentence: '" + a + "' is not a minimal node of positive characteristic");

  ConsistencyVerdict v;
  auto sf = splitting_field(psi.q, limits);
  v.field = sf.field;
  v.roots = sf.roots;
  Field f = Field::number(v.field);
  FunctionField k = f.arithmetic();
  v.consistent = true;
  for (auto& a : mins) {
    NodeVerdict nv;
    nv.p = chi.at(a);
    auto it = psi.conditions.find(a);
    Formula cond = it == psi.conditions.end() ? formula::truth() : it->second;
    auto ws = padic_valuations(v.field, nv.p, limits);
    for (std::size_t wi = 0; wi < ws.size() && !nv.satisfiable; ++wi) {
      TP0Structure s(FiniteTree::flat({a}), f, {{a, ws[wi]}});
      for (std::size_t ri = 0; ri < v.roots.size(); ++ri) {
        if (evaluate(cond, s, {}, {{"x", k.constant(v.roots[ri])}})) {
          nv.satisfiable = true;
          nv.witness = NodeWitness{wi, ws[wi].serialize(), ri};
          break;
        }
      }
    }
    v.consistent = v.consistent && nv.satisfiable;
    v.per_node.emplace(a, nv);
  }
  if (v.consistent) v.witness_structure = build_witness(v, tree, chi, limits);
  return v;
}

struct AgreementReport {
  bool agree = false;
  bool consistent = false;
  MeasureResult measure;
};

/// decide_psi against the measure of the sentence over (Q; v_{p_i} at a_i).
inline AgreementReport consistency_equals_positive_measure(const PsiSentence& psi, const FiniteTree& tree,
                                                           const CharFunction& chi, const Limits& limits = {}) {
  if (chi.at(tree.bottom()) != 0) throw PreconditionError("measure comparison needs characteristic 0 at the bottom");
  auto verdict = decide_psi(psi, tree, chi, limits);
  Field fq = Field::number(NumberField::rationals());
  std::map<std::string, Handle> minimal;
  for (auto& a : chi.minimal_positive(tree)) minimal.emplace(a, rational_padic(chi.at(a)));
  auto base = complete_from_minimal(tree, fq, chi, minimal);
  auto m = measure(psi.as_formula(), {}, base, limits);
  return {verdict.consistent == (m.value > 0), verdict.consistent, m};
}

}  // namespace tpval
