#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tpval/structures/handle.hpp"
#include "tpval/trees/tree.hpp"

namespace tpval {

/// A finite tree P, a field K, and a weakly order-reversing assignment of
/// supported valuation rings: O_bottom = K and p <= p' implies O_p ⊇ O_p'.
class TP0Structure {
 public:
  /// Nodes missing from `assignment` other than the bottom are an error; the
  /// bottom defaults to the trivial ring.
  TP0Structure(FiniteTree tree, Field field, const std::map<std::string, Handle>& assignment)
      : tree_(std::move(tree)), field_(std::move(field)) {
    for (auto& [n, h] : assignment)
      if (!tree_.contains(n)) throw PreconditionError("structure: unknown node '" + n + "'");
    for (int i = 0; i < tree_.size(); ++i) {
      auto it = assignment.find(tree_.name(i));
      if (it == assignment.end()) {
        if (i != 0) throw PreconditionError("structure: node '" + tree_.name(i) + "' has no handle");
        handles_.push_back(Handle::trivial(field_));
      } else {
        handles_.push_back(it->second);
      }
    }
    validate();
  }

  const FiniteTree& tree() const { return tree_; }
  const Field& field() const { return field_; }
  const Handle& at(int i) const { return handles_.at(static_cast<std::size_t>(i)); }
  const Handle& at(const std::string& node) const { return at(tree_.index(node)); }
  const std::vector<Handle>& handles() const { return handles_; }

  std::map<std::string, Handle> assignment() const {
    std::map<std::string, Handle> m;
    for (int i = 0; i < tree_.size(); ++i) m.emplace(tree_.name(i), handles_[i]);
    return m;
  }

  CharFunction char_function() const {
    CharFunction c;
    for (int i = 0; i < tree_.size(); ++i) c.set(tree_.name(i), handles_[i].residue_characteristic());
    return c;
  }

  /// Structure file: a tree block, a field line, one node line per node.
  std::string serialize() const {
    std::ostringstream os;
    os << "tree\n" << tree_.serialize() << "end\n" << field_.serialize() << "\n";
    for (int i : tree_.order())
      os << "node " << (i == 0 ? std::string("_") : tree_.name(i)) << " = " << handles_[i].serialize() << "\n";
    return os.str();
  }

  static TP0Structure parse(const std::string& text, const Limits& limits = {}) {
    std::istringstream is(text);
    std::string line, tree_text;
    std::optional<Field> field;
    std::vector<std::pair<std::string, std::pair<std::string, int>>> nodes;
    int lineno = 0;
    enum { Start, InTree, AfterTree } state = Start;
    while (std::getline(is, line)) {
      ++lineno;
      std::string t = text::trim(text::strip_comment(line));
      if (t.empty()) continue;
      if (state == Start) {
        if (t != "tree") throw ParseError("structure: expected 'tree'", lineno, 1);
        state = InTree;
      } else if (state == InTree) {
        if (t == "end") state = AfterTree;
        else tree_text += t + "\n";
      } else if (text::starts_with(t, "field")) {
        if (field) throw ParseError("structure: second field line", lineno, 1);
        try {
          field = Field::parse(t);
        } catch (const ParseError& e) {
          throw ParseError(e.what(), lineno, 1);
        }
      } else if (text::starts_with(t, "node ")) {
        auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("structure: expected 'node <name> = <handle>'", lineno, 1);
        nodes.push_back({text::trim(t.substr(5, eq - 5)), {text::trim(t.substr(eq + 1)), lineno}});
      } else {
        throw ParseError("structure: unexpected line '" + t + "'", lineno, 1);
      }
    }
    if (state != AfterTree) throw ParseError("structure: missing tree block");
    if (!field) throw ParseError("structure: missing field line");
    FiniteTree tree = FiniteTree::parse(tree_text);
    std::map<std::string, Handle> assignment;
    for (auto& [name, body] : nodes) {
      std::string n = name == "_" ? tree.bottom() : name;
      if (!tree.contains(n)) throw ParseError("structure: unknown node '" + name + "'", body.second, 1);
      if (assignment.count(n)) throw ParseError("structure: node '" + name + "' assigned twice", body.second, 1);
      try {
        assignment.emplace(n, Handle::parse(*field, body.first, limits));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), body.second, 1);
      }
    }
    return TP0Structure(std::move(tree), *field, assignment);
  }

  friend bool operator==(const TP0Structure& a, const TP0Structure& b) {
    return a.tree_ == b.tree_ && a.field_ == b.field_ && a.handles_ == b.handles_;
  }
  friend bool operator!=(const TP0Structure& a, const TP0Structure& b) { return !(a == b); }

 private:
  void validate() const {
    for (int i = 0; i < tree_.size(); ++i)
      if (handles_[i].field() != field_)
        throw PreconditionError("structure: handle at '" + tree_.name(i) + "' is on " + handles_[i].field().label() +
                                ", not " + field_.label());
    if (!handles_[0].is_trivial()) throw PreconditionError("structure: the bottom node must carry the trivial ring");
    for (int i = 1; i < tree_.size(); ++i)
      if (!contains(handles_[tree_.parent(i)], handles_[i]))
        throw PreconditionError("structure: ring at '" + tree_.name(i) + "' is not contained in its parent's");
    char_function().validate(tree_);
  }

  FiniteTree tree_;
  Field field_;
  std::vector<Handle> handles_;
};

/// Tree generated by the rings and K under joins, with its tautological
/// assignment.
struct GeneratedTree {
  TP0Structure structure;
  std::vector<std::string> input_nodes;  // node of each input ring
};

inline GeneratedTree tree_from_valuations(const std::vector<Handle>& handles) {
  if (handles.empty()) throw PreconditionError("tree_from_valuations: no rings given");
  Field field = handles.front().field();
  std::vector<Handle> rings{Handle::trivial(field)};
  auto add = [&](const Handle& h) {
    for (std::size_t i = 0; i < rings.size(); ++i)
      if (rings[i] == h) return i;
    rings.push_back(h);
    return rings.size() - 1;
  };
  std::vector<std::size_t> input_index;
  for (auto& h : handles) input_index.push_back(add(h));
  std::size_t inputs_end = rings.size();
  for (bool grew = true; grew;) {
    grew = false;
    std::size_t n = rings.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        std::size_t before = rings.size();
        add(join(rings[i], rings[j]));
        grew = grew || rings.size() > before;
      }
  }
  std::vector<std::string> names{"_"};
  for (std::size_t i = 1; i < rings.size(); ++i) {
    if (i < inputs_end) {
      std::size_t k = i - 1;
      names.push_back(k < 26 ? std::string(1, static_cast<char>('a' + k)) : "n" + std::to_string(k));
    } else {
      names.push_back("j" + std::to_string(i - inputs_end + 1));
    }
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 1; i < rings.size(); ++i) {
    // The parent is the smallest proper overring in the set.
    std::optional<std::size_t> parent;
    for (std::size_t j = 0; j < rings.size(); ++j) {
      if (j == i || !contains(rings[j], rings[i])) continue;
      if (!parent || contains(rings[*parent], rings[j])) parent = j;
    }
    edges.emplace_back(names[i], names[*parent]);
  }
  FiniteTree tree("_", edges);
  std::map<std::string, Handle> assignment;
  for (std::size_t i = 0; i < rings.size(); ++i) assignment.emplace(names[i], rings[i]);
  std::vector<std::string> input_nodes;
  for (auto i : input_index) input_nodes.push_back(names[i]);
  return {TP0Structure(tree, field, assignment), input_nodes};
}

/// The structure determined by its rings at the minimal positive-characteristic
/// nodes: trivial where the characteristic is 0, and the ring of the minimal
/// node below everywhere above it.
inline TP0Structure complete_from_minimal(const FiniteTree& tree, const Field& field, const CharFunction& chi,
                                          const std::map<std::string, Handle>& minimal) {
  chi.validate(tree);
  auto mins = chi.minimal_positive(tree);
  std::map<std::string, Handle> assignment;
  for (int i : tree.order()) {
    const std::string& n = tree.name(i);
    if (chi.at(n) == 0) {
      assignment.emplace(n, Handle::trivial(field));
      continue;
    }
    int a = i;
    while (a != 0 && chi.at(tree.name(tree.parent(a))) != 0) a = tree.parent(a);
    auto it = minimal.find(tree.name(a));
    if (it == minimal.end()) throw PreconditionError("no ring given for minimal node '" + tree.name(a) + "'");
    if (it->second.residue_characteristic() != chi.at(n))
      throw PreconditionError("ring at '" + tree.name(a) + "' has the wrong residue characteristic");
    assignment.emplace(n, it->second);
  }
  return TP0Structure(tree, field, assignment);
}

}  // namespace tpval
