#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tpval/formulas/evaluate.hpp"

namespace tpval {

struct MeasureResult {
  Rational value;
  std::size_t true_count = 0;
  std::size_t total = 0;
  NumberField field;         // constants of the field averaged over
  FieldEmbedding embedding;  // base constants -> field
  std::vector<bool> truths;  // per structure extension, in enumeration order

  std::string field_label(bool function_field) const { return field.label() + (function_field ? "(t)" : ""); }
};

namespace measure_detail {

inline void check_bindings(const TP0Structure& s, const Formula& phi, const Bindings& b) {
  std::set<std::string> ps;
  formula::params(phi, ps);
  for (auto& p : ps)
    if (!b.count(p)) throw PreconditionError("parameter $" + p + " is not bound");
  FunctionField k = s.field().arithmetic();
  for (auto& [n, x] : b) {
    if (!s.field().function_field && (x.num.size() > 1 || x.den.size() > 1))
      throw PreconditionError("parameter $" + n + " is not an element of " + s.field().label());
  }
  check_formula(phi, &s.tree());
}

}  // namespace measure_detail

/// Average truth of φ over the structure extensions of S along emb. The
/// target must split every binder polynomial and be normal over the base.
inline MeasureResult measure_over(const Formula& phi, const Bindings& bindings, const TP0Structure& s,
                                  const FieldEmbedding& emb, const Limits& limits = {}) {
  measure_detail::check_bindings(s, phi, bindings);
  std::vector<QPoly> polys;
  formula::binder_polys(phi, polys);
  if (!splits_in(emb.target(), polys))
    throw PreconditionError("measure: " + emb.target().label() + " does not split the binder polynomials");
  auto ext = enumerate_structure_extensions(s, emb, limits);
  Bindings mapped = map_bindings(emb, bindings);
  MeasureResult r{Rational(0), 0, ext.members.size(), emb.target(), emb, {}};
  for (auto& m : ext.members) {
    bool t = evaluate(phi, m, mapped);
    r.truths.push_back(t);
    r.true_count += t ? 1 : 0;
  }
  if (r.total == 0) throw InvariantViolation("measure: no structure extensions");
  r.value = make_rational(Integer(static_cast<unsigned long>(r.true_count)), Integer(static_cast<unsigned long>(r.total)));
  return r;
}

/// P(φ | S), averaged over the minimal determining extension.
inline MeasureResult measure(const Formula& phi, const Bindings& bindings, const TP0Structure& s, const Limits& limits = {}) {
  auto d = determining_extension(phi, s, limits);
  return measure_over(phi, bindings, s, d.embedding, limits);
}

/// Recomputes over a second normal extension and compares.
inline bool measure_stable_under(const Formula& phi, const Bindings& bindings, const TP0Structure& s,
                                 const FieldEmbedding& alt, const Limits& limits = {}) {
  return measure_over(phi, bindings, s, alt, limits).value == measure(phi, bindings, s, limits).value;
}

/// An isomorphism of structures: an automorphism of the constants (absent
/// means the identity) together with a renaming of the tree nodes.
struct StructureIsomorphism {
  std::optional<FieldEmbedding> sigma;
  std::map<std::string, std::string> rename;
};

struct AxiomReport {
  std::vector<std::pair<std::string, bool>> checks;
  bool ok() const {
    for (auto& [n, v] : checks)
      if (!v) return false;
    return true;
  }
  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (auto& [n, v] : checks)
      if (!v) out.push_back(n);
    return out;
  }
};

/// Checks the measure identities on one instance. Every measure is computed
/// over its own minimal determining extension, so the identities compare
/// averages taken over different fields.
inline AxiomReport check_axioms(const TP0Structure& s, const Formula& phi, const Formula& psi, const Bindings& bindings,
                                const std::optional<StructureIsomorphism>& iso = std::nullopt,
                                const Limits& limits = {}) {
  using namespace formula;
  AxiomReport rep;
  auto add = [&](const std::string& name, bool v) { rep.checks.emplace_back(name, v); };
  auto m = [&](const Formula& f) { return measure(f, bindings, s, limits); };
  auto p = m(phi), q = m(psi);
  add("range", p.value >= 0 && p.value <= 1 && q.value >= 0 && q.value <= 1);
  add("negation", m(negate(phi)).value == 1 - p.value);
  add("inclusion-exclusion", p.value + q.value == m(disj(phi, psi)).value + m(conj(phi, psi)).value);

  // Positivity and certainty, read off at a common larger field.
  auto common = determining_extension(conj(phi, psi), s, limits);
  auto over = measure_over(phi, bindings, s, common.embedding, limits);
  bool some = std::find(over.truths.begin(), over.truths.end(), true) != over.truths.end();
  bool all = std::find(over.truths.begin(), over.truths.end(), false) == over.truths.end();
  add("positivity", (p.value > 0) == some);
  add("certainty", (p.value == 1) == all);

  // Weighting through an intermediate normal field M: the splitting field of
  // the first binder factor (or of x^2 - 2 when φ has no binders).
  std::vector<QPoly> polys;
  binder_polys(phi, polys);
  const NumberField& k = s.field().constants;
  QPoly first = polys.empty() ? qpoly({-2, 0, 1}) : factor_over_Q(polys.front()).front().factor;
  auto mid = splitting_field(k, to_kpoly(k, first), limits);
  auto mids = enumerate_structure_extensions(s, mid.base, limits);
  Rational sum(0);
  Bindings mb = map_bindings(mid.base, bindings);
  for (auto& sm : mids.members) sum += measure(phi, mb, sm, limits).value;
  sum /= static_cast<long>(mids.members.size());
  add("weighting", sum == p.value);

  if (iso) {
    TP0Structure t = rename_nodes(s, iso->rename);
    Bindings tb = bindings;
    if (iso->sigma) {
      t = push_forward(t, *iso->sigma, limits);
      tb = map_bindings(*iso->sigma, bindings);
    }
    add("isomorphism", measure(rename_nodes(phi, iso->rename), tb, t, limits).value == p.value);
  }
  return rep;
}

struct InvarianceReport {
  bool equal = false;
  MeasureResult small, large;
};

/// Compares P(φ | S_K) and P(φ | S_L) when S_L extends S_K with relatively
/// algebraically closed residue extensions. Parameters come from K.
inline InvarianceReport invariance_under_closed_residue_extension(const Formula& phi, const Bindings& bindings,
                                                                  const TP0Structure& sk, const TP0Structure& sl,
                                                                  const Limits& limits = {}) {
  check_closed_residue_hypothesis(sk, sl);
  measure_detail::check_bindings(sk, phi, bindings);
  InvarianceReport r{false, measure(phi, bindings, sk, limits), measure(phi, bindings, sl, limits)};
  r.equal = r.small.value == r.large.value;
  return r;
}

}  // namespace tpval
