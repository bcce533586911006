#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "tpval/structures/structure.hpp"
#include "tpval/trees/choice_system.hpp"

namespace tpval {

/// All extensions of a structure along a constant-field embedding K -> L.
struct StructureExtensionSet {
  TP0Structure base;
  Field overfield;
  FieldEmbedding embedding;
  std::vector<TP0Structure> members;
};

/// Recurses down the tree, choosing at each node an extension of its ring
/// contained in the ring already chosen at the parent. Members come out in
/// lexicographic order of the per-node canonical extension lists.
inline StructureExtensionSet enumerate_structure_extensions(const TP0Structure& s, const FieldEmbedding& emb,
                                                            const Limits& limits = {}) {
  if (emb.source() != s.field().constants) throw PreconditionError("extension: embedding source is not the structure's constants");
  const FiniteTree& tree = s.tree();
  Field big = s.field().over(emb.target());
  std::vector<std::vector<Handle>> candidates(tree.size());
  for (int i = 0; i < tree.size(); ++i) candidates[i] = s.at(i).extensions(emb, limits);
  std::vector<int> order = tree.order();
  std::vector<TP0Structure> members;
  std::vector<const Handle*> chosen(tree.size(), nullptr);
  auto recurse = [&](auto&& self, std::size_t pos) -> void {
    if (pos == order.size()) {
      std::map<std::string, Handle> a;
      for (int i = 0; i < tree.size(); ++i) a.emplace(tree.name(i), *chosen[i]);
      members.emplace_back(tree, big, a);
      return;
    }
    int x = order[pos];
    for (const auto& h : candidates[x]) {
      if (x != 0 && !contains(*chosen[tree.parent(x)], h)) continue;
      chosen[x] = &h;
      self(self, pos + 1);
    }
    chosen[x] = nullptr;
  };
  recurse(recurse, 0);
  return {s, big, emb, members};
}

/// Node-wise restriction along emb: K -> L of a structure on L.
inline TP0Structure restrict_structure(const TP0Structure& s, const FieldEmbedding& emb, const Limits& limits = {}) {
  if (emb.target() != s.field().constants) throw PreconditionError("restrict: embedding target is not the structure's constants");
  std::map<std::string, Handle> a;
  for (int i = 0; i < s.tree().size(); ++i) a.emplace(s.tree().name(i), s.at(i).restrict(emb, limits));
  return TP0Structure(s.tree(), s.field().over(emb.source()), a);
}

/// Restriction of a structure on F(t) to its constants F.
inline TP0Structure restrict_to_constants(const TP0Structure& s) {
  std::map<std::string, Handle> a;
  for (int i = 0; i < s.tree().size(); ++i) a.emplace(s.tree().name(i), s.at(i).to_constants());
  return TP0Structure(s.tree(), Field::number(s.field().constants), a);
}

/// Is res(h_big) / res(h_small) relatively algebraically closed, for h_big on
/// L and its restriction h_small on K with L = K or L = K(t)? Decided for the
/// supported kinds only: a Gauss ring has residue field k(t) over k, and a
/// composed ring adds a residue extension of degree deg(place).
inline bool residue_extension_closed(const Handle& big, const Handle& small) {
  if (big.field() == small.field()) return big == small;
  if (!big.is_function_field() || small.is_function_field())
    throw PreconditionError("relative algebraic closure is only decided for K(t) over K or equal fields");
  const FFHandle& h = big.ff();
  return !h.is_composed() || h.place().degree() == 1;
}

/// Throws unless S_L lives on L = K or K(t), restricts to S_K node-wise and
/// has relatively algebraically closed residue extensions at every node.
inline void check_closed_residue_hypothesis(const TP0Structure& sk, const TP0Structure& sl) {
  if (!(sk.tree() == sl.tree())) throw PreconditionError("structures on different trees");
  if (sk.field().constants != sl.field().constants || (sk.field().function_field && sk.field() != sl.field()))
    throw PreconditionError("the larger field must be K or K(t) for a number field K");
  const FiniteTree& tree = sk.tree();
  bool transcendental = sk.field() != sl.field();
  for (int i = 0; i < tree.size(); ++i) {
    Handle down = transcendental ? sl.at(i).to_constants() : sl.at(i);
    if (down != sk.at(i))
      throw PreconditionError("ring at '" + tree.name(i) + "' of the larger structure does not restrict to the smaller");
    if (!residue_extension_closed(sl.at(i), sk.at(i)))
      throw PreconditionError("residue extension at '" + tree.name(i) + "' is not relatively algebraically closed");
  }
}

/// Image of a ring under an isomorphism sigma of constant fields.
inline Handle push_forward(const Handle& h, const FieldEmbedding& sigma, const Limits& limits = {}) {
  if (!h.is_function_field()) return push_forward(h.number(), sigma, limits);
  const FFHandle& f = h.ff();
  if (f.is_trivial()) return FFHandle::trivial(sigma.target());
  ValuationHandle base = push_forward(f.base(), sigma, limits);
  if (f.is_gauss()) return FFHandle::gauss(base);
  const ResiduePlace& pl = f.place();
  if (pl.infinite) return FFHandle::composed(base, pl);
  if (base.is_trivial()) return FFHandle::composed(base, ResiduePlace::number(sigma.apply(pl.nf)));
  return FFHandle::composed(base, ResiduePlace::finite(ResidueMap(f.base(), base, sigma).apply(pl.gf)));
}

inline TP0Structure push_forward(const TP0Structure& s, const FieldEmbedding& sigma, const Limits& limits = {}) {
  if (sigma.source() != s.field().constants) throw PreconditionError("push_forward: field mismatch");
  std::map<std::string, Handle> a;
  for (int i = 0; i < s.tree().size(); ++i) a.emplace(s.tree().name(i), push_forward(s.at(i), sigma, limits));
  return TP0Structure(s.tree(), s.field().over(sigma.target()), a);
}

/// The same structure with its nodes renamed; names missing from the map
/// are kept. The map must be injective on the tree.
inline TP0Structure rename_nodes(const TP0Structure& s, const std::map<std::string, std::string>& m) {
  auto nm = [&](const std::string& n) {
    auto it = m.find(n);
    return it == m.end() ? n : it->second;
  };
  const FiniteTree& t = s.tree();
  std::vector<std::pair<std::string, std::string>> edges;
  for (int i = 1; i < t.size(); ++i) edges.emplace_back(nm(t.name(i)), nm(t.name(t.parent(i))));
  std::map<std::string, Handle> a;
  for (int i = 0; i < t.size(); ++i)
    if (!a.emplace(nm(t.name(i)), s.at(i)).second) throw PreconditionError("rename: names collide");
  return TP0Structure(FiniteTree(nm(t.bottom()), edges), s.field(), a);
}

struct FiberReport {
  std::vector<std::size_t> sizes;  // one per extension of S_K, in enumeration order
  bool uniform = false;
  Rational ratio;                  // |S_L extensions| / |S_K extensions|
  std::size_t count_k = 0, count_l = 0;
  ChoiceSystem system;             // the P x {0,1} system
};

/// Theorem check: S_L on L ⊇ K (L = K, or L = K(t) with K a number field),
/// K' = emb.target() normal over K, L' the compositum. Builds the choice
/// system on P x {0,1} whose partial choices on P x {0} are the extensions of
/// S_K to K' and whose full choices are the extensions of S_L to L', and
/// reports the fibers of the restriction map.
inline FiberReport fiber_report(const TP0Structure& sk, const TP0Structure& sl, const FieldEmbedding& emb,
                                const Limits& limits = {}) {
  check_closed_residue_hypothesis(sk, sl);
  const FiniteTree& tree = sk.tree();
  bool transcendental = sk.field() != sl.field();
  auto down = [&](const Handle& h) { return transcendental ? h.to_constants() : h; };
  auto ek = enumerate_structure_extensions(sk, emb, limits);
  auto el = enumerate_structure_extensions(sl, emb, limits);

  FiberReport r;
  ChoiceSystem& cs = r.system;
  std::vector<std::vector<Handle>> s0(tree.size()), s1(tree.size());
  std::vector<int> id0(tree.size()), id1(tree.size());
  for (int x : tree.order()) {
    s0[x] = sk.at(x).extensions(emb, limits);
    s1[x] = sl.at(x).extensions(emb, limits);
    id0[x] = cs.add_element("(" + tree.name(x) + ",0)", static_cast<int>(s0[x].size()));
    id1[x] = cs.add_element("(" + tree.name(x) + ",1)", static_cast<int>(s1[x].size()));
  }
  auto relation = [](const std::vector<Handle>& upper, const std::vector<Handle>& lower, auto pred) {
    ChoiceSystem::Relation rel(upper.size(), std::vector<bool>(lower.size(), false));
    for (std::size_t a = 0; a < upper.size(); ++a)
      for (std::size_t b = 0; b < lower.size(); ++b) rel[a][b] = pred(upper[a], lower[b]);
    return rel;
  };
  auto inside = [](const Handle& child, const Handle& parent) { return contains(parent, child); };
  for (int x : tree.order()) {
    cs.add_cover(id1[x], id0[x], relation(s1[x], s0[x], [&](const Handle& l, const Handle& k) { return down(l) == k; }));
    if (x == 0) continue;
    int y = tree.parent(x);
    cs.add_cover(id0[x], id0[y], relation(s0[x], s0[y], inside));
    cs.add_cover(id1[x], id1[y], relation(s1[x], s1[y], inside));
  }
  std::vector<bool> lower(cs.size(), false);
  for (int x = 0; x < tree.size(); ++x) lower[id0[x]] = true;
  r.count_k = cs.partial_choices(lower).size();
  r.count_l = cs.partial_choices(cs.full()).size();
  if (r.count_k != ek.members.size() || r.count_l != el.members.size())
    throw InvariantViolation("fiber_report: choice system and direct enumeration disagree");
  r.sizes = cs.fiber_sizes(cs.full(), lower);
  r.uniform = !r.sizes.empty() && r.sizes.front() > 0 &&
              std::all_of(r.sizes.begin(), r.sizes.end(), [&](std::size_t n) { return n == r.sizes.front(); });
  r.ratio = make_rational(Integer(static_cast<unsigned long>(r.count_l)), Integer(static_cast<unsigned long>(r.count_k)));
  return r;
}

}  // namespace tpval
