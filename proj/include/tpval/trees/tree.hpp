#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tpval/algebra/integer.hpp"

namespace tpval {

/// A finite tree given by a parent map. Every node reaches the bottom, so
/// each interval [bottom, x] is a chain by construction.
class FiniteTree {
 public:
  FiniteTree() : FiniteTree("_", {}) {}

  /// child/parent pairs; every parent must be the bottom or another child.
  FiniteTree(std::string bottom, const std::vector<std::pair<std::string, std::string>>& edges) {
    names_.push_back(bottom);
    parent_.push_back(-1);
    index_[bottom] = 0;
    for (auto& [child, par] : edges) {
      if (index_.count(child)) throw PreconditionError("tree: duplicate node '" + child + "'");
      index_[child] = static_cast<int>(names_.size());
      names_.push_back(child);
      parent_.push_back(-1);
    }
    for (auto& [child, par] : edges) {
      auto it = index_.find(par);
      if (it == index_.end()) throw PreconditionError("tree: unknown parent '" + par + "' of '" + child + "'");
      parent_[index_.at(child)] = it->second;
    }
    // Every node must reach the bottom.
    for (int i = 1; i < size(); ++i) {
      int steps = 0;
      int x = i;
      while (x != 0) {
        x = parent_[x];
        if (x < 0 || ++steps > size()) throw PreconditionError("tree: node '" + names_[i] + "' does not reach bottom");
      }
    }
    depth_.assign(names_.size(), 0);
    for (int i = 0; i < size(); ++i)
      for (int x = i; x != 0; x = parent_[x]) ++depth_[i];
    order_.resize(names_.size());
    for (int i = 0; i < size(); ++i) order_[i] = i;
    std::sort(order_.begin(), order_.end(), [&](int a, int b) {
      if (depth_[a] != depth_[b]) return depth_[a] < depth_[b];
      return names_[a] < names_[b];
    });
  }

  /// Text form: one `child<parent` line per non-bottom node, bottom `_`.
  static FiniteTree parse(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> edges;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
      if (line.empty()) continue;
      auto lt = line.find('<');
      if (lt == std::string::npos || lt == 0 || lt + 1 == line.size())
        throw ParseError("tree: expected 'child<parent'", lineno, 1);
      edges.emplace_back(line.substr(0, lt), line.substr(lt + 1));
    }
    try {
      return FiniteTree("_", edges);
    } catch (const PreconditionError& e) {
      throw ParseError(e.what());
    }
  }

  std::string serialize() const {
    std::ostringstream os;
    for (int i : order_) {
      if (i == 0) continue;
      int p = parent_[i];
      os << names_[i] << "<" << (p == 0 ? std::string("_") : names_[p]) << "\n";
    }
    return os.str();
  }

  static FiniteTree flat(const std::vector<std::string>& leaves) {
    std::vector<std::pair<std::string, std::string>> e;
    for (auto& l : leaves) e.emplace_back(l, "_");
    return FiniteTree("_", e);
  }

  static FiniteTree chain(const std::vector<std::string>& nodes) {
    std::vector<std::pair<std::string, std::string>> e;
    std::string prev = "_";
    for (auto& n : nodes) {
      e.emplace_back(n, prev);
      prev = n;
    }
    return FiniteTree("_", e);
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& bottom() const { return names_[0]; }
  const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
  bool contains(const std::string& n) const { return index_.count(n) > 0; }
  int index(const std::string& n) const {
    auto it = index_.find(n);
    if (it == index_.end()) throw PreconditionError("tree: unknown node '" + n + "'");
    return it->second;
  }
  int parent(int i) const { return parent_.at(static_cast<std::size_t>(i)); }
  int depth(int i) const { return depth_.at(static_cast<std::size_t>(i)); }
  /// Bottom first, then by depth and name.
  const std::vector<int>& order() const { return order_; }
  std::vector<std::string> nodes() const {
    std::vector<std::string> out;
    for (int i : order_) out.push_back(names_[i]);
    return out;
  }

  bool leq(int x, int y) const {
    for (int z = y; z >= 0; z = parent_[z])
      if (z == x) return true;
    return false;
  }
  bool leq(const std::string& x, const std::string& y) const { return leq(index(x), index(y)); }

  int meet(int x, int y) const {
    while (depth_[x] > depth_[y]) x = parent_[x];
    while (depth_[y] > depth_[x]) y = parent_[y];
    while (x != y) {
      x = parent_[x];
      y = parent_[y];
    }
    return x;
  }
  std::string meet(const std::string& x, const std::string& y) const { return names_[meet(index(x), index(y))]; }

  std::vector<int> children(int x) const {
    std::vector<int> out;
    for (int i : order_)
      if (i != 0 && parent_[i] == x) out.push_back(i);
    return out;
  }

  /// Minimal elements of P minus bottom.
  std::vector<std::string> minimal_nonbottom() const {
    std::vector<std::string> out;
    for (int c : children(0)) out.push_back(names_[c]);
    return out;
  }

  /// The subtree {y >= x}, with x as its bottom.
  FiniteTree subtree(const std::string& root) const {
    int r = index(root);
    std::vector<std::pair<std::string, std::string>> e;
    for (int i : order_)
      if (i != r && leq(r, i)) e.emplace_back(names_[i], names_[parent_[i]]);
    return FiniteTree(root, e);
  }

  std::vector<FiniteTree> branches() const {
    std::vector<FiniteTree> out;
    for (auto& m : minimal_nonbottom()) out.push_back(subtree(m));
    return out;
  }

  friend bool operator==(const FiniteTree& a, const FiniteTree& b) {
    if (a.size() != b.size() || a.bottom() != b.bottom()) return false;
    for (int i = 1; i < a.size(); ++i) {
      if (!b.contains(a.names_[i])) return false;
      int j = b.index(a.names_[i]);
      if (a.names_[a.parent_[i]] != b.names_[b.parent_[j]]) return false;
    }
    return true;
  }

 private:
  std::vector<std::string> names_;
  std::vector<int> parent_;
  std::vector<int> depth_;
  std::vector<int> order_;
  std::map<std::string, int> index_;
};

/// Residue characteristic per node: 0 or a prime, and once a node has a
/// positive characteristic every node above it has the same one.
class CharFunction {
 public:
  CharFunction() = default;
  explicit CharFunction(std::map<std::string, std::int64_t> assignment) : assignment_(std::move(assignment)) {}

  std::int64_t at(const std::string& node) const {
    auto it = assignment_.find(node);
    if (it == assignment_.end()) throw PreconditionError("char function: node '" + node + "' unassigned");
    return it->second;
  }
  const std::map<std::string, std::int64_t>& assignment() const { return assignment_; }
  void set(const std::string& node, std::int64_t p) { assignment_[node] = p; }

  /// Throws PreconditionError describing the first violation.
  void validate(const FiniteTree& tree) const {
    for (auto& [n, p] : assignment_) {
      if (!tree.contains(n)) throw PreconditionError("char function: unknown node '" + n + "'");
      if (p != 0 && !is_prime(p)) throw PreconditionError("char function: " + std::to_string(p) + " is not 0 or prime");
    }
    for (int i = 0; i < tree.size(); ++i) {
      std::int64_t p = at(tree.name(i));
      if (i != 0) {
        std::int64_t q = at(tree.name(tree.parent(i)));
        if (q != 0 && q != p)
          throw PreconditionError("char function: node '" + tree.name(i) + "' has characteristic " +
                                  std::to_string(p) + " above a node of characteristic " + std::to_string(q));
      }
    }
  }

  bool valid(const FiniteTree& tree) const {
    try {
      validate(tree);
      return true;
    } catch (const PreconditionError&) {
      return false;
    }
  }

  /// Minimal nodes with positive characteristic.
  std::vector<std::string> minimal_positive(const FiniteTree& tree) const {
    std::vector<std::string> out;
    for (int i : tree.order()) {
      if (at(tree.name(i)) == 0) continue;
      if (i != 0 && at(tree.name(tree.parent(i))) != 0) continue;
      out.push_back(tree.name(i));
    }
    return out;
  }

  static CharFunction parse(const std::string& text) {
    CharFunction cf;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
      if (line.empty() || line[0] == '#') continue;
      auto eq = line.find('=');
      if (eq == std::string::npos || eq == 0) throw ParseError("char function: expected 'node=p'", lineno, 1);
      try {
        cf.set(line.substr(0, eq), std::stoll(line.substr(eq + 1)));
      } catch (const std::logic_error&) {
        throw ParseError("char function: malformed characteristic", lineno, static_cast<int>(eq) + 2);
      }
    }
    return cf;
  }

  std::string serialize(const FiniteTree& tree) const {
    std::ostringstream os;
    for (auto& n : tree.nodes()) os << (n == tree.bottom() ? std::string("_") : n) << "=" << at(n) << "\n";
    return os.str();
  }

 private:
  std::map<std::string, std::int64_t> assignment_;
};

}  // namespace tpval
