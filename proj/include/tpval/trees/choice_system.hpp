#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tpval/errors.hpp"

namespace tpval {

/// A partial choice: entry i is the chosen index into S_i, or -1 when i is
/// outside the downset.
using Choice = std::vector<int>;

/// Sets S_x on a finite poset with relations R_{x,y} on covers x ⊳ y.
/// Elements are 0..n-1; set members are 0..|S_x|-1.
class ChoiceSystem {
 public:
  using Relation = std::vector<std::vector<bool>>;  // [s in S_x][t in S_y]

  ChoiceSystem() = default;

  int add_element(std::string name, int set_size) {
    if (set_size < 0) throw PreconditionError("choice system: negative set size");
    if (index_.count(name)) throw PreconditionError("choice system: duplicate element '" + name + "'");
    index_[name] = static_cast<int>(names_.size());
    names_.push_back(std::move(name));
    sizes_.push_back(set_size);
    lower_covers_.emplace_back();
    order_dirty_ = true;
    finalize();
    return static_cast<int>(names_.size()) - 1;
  }

  /// Declares x ⊳ y (x covers y) with relation R_{x,y}.
  void add_cover(int x, int y, Relation r) {
    check(x);
    check(y);
    if (x == y) throw PreconditionError("choice system: self cover");
    if (r.size() != static_cast<std::size_t>(sizes_[x]))
      throw PreconditionError("choice system: relation rows do not match |S_" + names_[x] + "|");
    for (auto& row : r)
      if (row.size() != static_cast<std::size_t>(sizes_[y]))
        throw PreconditionError("choice system: relation columns do not match |S_" + names_[y] + "|");
    for (auto& [z, _] : lower_covers_[x])
      if (z == y) throw PreconditionError("choice system: duplicate cover");
    lower_covers_[x].emplace_back(y, std::move(r));
    order_dirty_ = true;
    try {
      finalize();
    } catch (...) {
      lower_covers_[x].pop_back();
      order_dirty_ = true;
      finalize();
      throw;
    }
  }

  void add_total_cover(int x, int y) {
    check(x);
    check(y);
    add_cover(x, y, Relation(sizes_[x], std::vector<bool>(sizes_[y], true)));
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int x) const { return names_.at(x); }
  int index(const std::string& n) const {
    auto it = index_.find(n);
    if (it == index_.end()) throw PreconditionError("choice system: unknown element '" + n + "'");
    return it->second;
  }
  int set_size(int x) const { return sizes_.at(x); }
  const std::vector<std::pair<int, Relation>>& lower_covers(int x) const { return lower_covers_.at(x); }

  bool leq(int y, int x) const {
    finalize();
    return below_[x][y];
  }

  /// Fixed linear extension: by height, then element index.
  const std::vector<int>& topological_order() const {
    finalize();
    return topo_;
  }

  bool is_downset(const std::vector<bool>& d) const {
    if (d.size() != static_cast<std::size_t>(size())) return false;
    for (int x = 0; x < size(); ++x)
      if (d[x])
        for (auto& [y, _] : lower_covers_[x])
          if (!d[y]) return false;
    return true;
  }

  std::vector<bool> downset_of(const std::vector<std::string>& names) const {
    std::vector<bool> d(size(), false);
    for (auto& n : names) d[index(n)] = true;
    return d;
  }

  std::vector<bool> full() const { return std::vector<bool>(size(), true); }

  /// Γ(downset), lexicographic along the topological order.
  std::vector<Choice> partial_choices(const std::vector<bool>& downset) const {
    if (!is_downset(downset)) throw PreconditionError("choice system: set is not downward closed");
    std::vector<int> seq;
    for (int x : topological_order())
      if (downset[x]) seq.push_back(x);
    std::vector<Choice> out;
    Choice f(size(), -1);
    enumerate(seq, 0, f, out);
    return out;
  }

  /// Fiber sizes of Γ(big) → Γ(small), in the order of Γ(small).
  std::vector<std::size_t> fiber_sizes(const std::vector<bool>& big, const std::vector<bool>& small) const {
    if (!is_downset(big) || !is_downset(small)) throw PreconditionError("choice system: set is not downward closed");
    for (int x = 0; x < size(); ++x)
      if (small[x] && !big[x]) throw PreconditionError("choice system: small downset not contained in big one");
    std::map<Choice, std::size_t> counts;
    for (auto f : partial_choices(big)) {
      for (int x = 0; x < size(); ++x)
        if (!small[x]) f[x] = -1;
      ++counts[f];
    }
    std::vector<std::size_t> out;
    for (auto& g : partial_choices(small)) {
      auto it = counts.find(g);
      out.push_back(it == counts.end() ? 0 : it->second);
    }
    return out;
  }

  static constexpr int kMaxSmoothElements = 12;
  static constexpr int kMaxSmoothSetSize = 16;

  /// Brute force over every downset P' with x maximal in it.
  std::optional<std::size_t> check_smooth_at(int x) const {
    check(x);
    if (size() > kMaxSmoothElements)
      throw ResourceError("choice system: smoothness check limited to " + std::to_string(kMaxSmoothElements) +
                          " elements");
    for (int s : sizes_)
      if (s > kMaxSmoothSetSize)
        throw ResourceError("choice system: smoothness check limited to sets of size " +
                            std::to_string(kMaxSmoothSetSize));
    std::optional<std::size_t> common;
    const unsigned n = static_cast<unsigned>(size());
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (!(mask >> x & 1u)) continue;
      std::vector<bool> d(n);
      for (unsigned i = 0; i < n; ++i) d[i] = mask >> i & 1u;
      if (!is_downset(d)) continue;
      bool maximal = true;
      for (unsigned z = 0; z < n && maximal; ++z)
        if (d[z] && static_cast<int>(z) != x && leq(x, static_cast<int>(z))) maximal = false;
      if (!maximal) continue;
      std::vector<bool> smaller = d;
      smaller[x] = false;
      for (std::size_t c : fiber_sizes(d, smaller)) {
        if (c == 0) return std::nullopt;
        if (common && *common != c) return std::nullopt;
        common = c;
      }
    }
    return common;
  }
  std::optional<std::size_t> check_smooth_at(const std::string& x) const { return check_smooth_at(index(x)); }

  /// Text form:
  ///   element NAME SIZE
  ///   cover UPPER LOWER total
  ///   cover UPPER LOWER s-t s-t ...
  static ChoiceSystem parse(const std::string& text) {
    ChoiceSystem cs;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string kw;
      if (!(ls >> kw)) continue;
      try {
        if (kw == "element") {
          std::string n;
          int s;
          if (!(ls >> n >> s)) throw ParseError("choice system: expected 'element NAME SIZE'", lineno, 1);
          cs.add_element(n, s);
        } else if (kw == "cover") {
          std::string a, b, tok;
          if (!(ls >> a >> b)) throw ParseError("choice system: expected 'cover UPPER LOWER ...'", lineno, 1);
          int x = cs.index(a), y = cs.index(b);
          std::vector<std::string> toks;
          while (ls >> tok) toks.push_back(tok);
          if (toks.size() == 1 && toks[0] == "total") {
            cs.add_total_cover(x, y);
            continue;
          }
          Relation r(cs.sizes_[x], std::vector<bool>(cs.sizes_[y], false));
          for (auto& t : toks) {
            auto dash = t.find('-');
            if (dash == std::string::npos) throw ParseError("choice system: expected pair 's-t'", lineno, 1);
            int s = std::stoi(t.substr(0, dash)), u = std::stoi(t.substr(dash + 1));
            if (s < 0 || s >= cs.sizes_[x] || u < 0 || u >= cs.sizes_[y])
              throw ParseError("choice system: pair '" + t + "' out of range", lineno, 1);
            r[s][u] = true;
          }
          cs.add_cover(x, y, std::move(r));
        } else {
          throw ParseError("choice system: unknown keyword '" + kw + "'", lineno, 1);
        }
      } catch (const PreconditionError& e) {
        throw ParseError(e.what(), lineno, 1);
      } catch (const std::logic_error&) {
        throw ParseError("choice system: malformed number", lineno, 1);
      }
    }
    return cs;
  }

 private:
  void check(int x) const {
    if (x < 0 || x >= size()) throw PreconditionError("choice system: element out of range");
  }

  // Recomputed eagerly on every mutation, so const members never write.
  void finalize() const {
    if (!order_dirty_) return;
    const int n = size();
    below_.assign(n, std::vector<bool>(n, false));
    std::vector<int> height(n, -1);
    std::vector<int> state(n, 0);
    auto visit = [&](auto&& self, int x) -> int {
      if (state[x] == 2) return height[x];
      if (state[x] == 1) throw PreconditionError("choice system: cover relation has a cycle");
      state[x] = 1;
      int h = 0;
      below_[x][x] = true;
      for (auto& [y, _] : lower_covers_[x]) {
        h = std::max(h, self(self, y) + 1);
        for (int z = 0; z < n; ++z)
          if (below_[y][z]) below_[x][z] = true;
      }
      state[x] = 2;
      return height[x] = h;
    };
    for (int x = 0; x < n; ++x) visit(visit, x);
    topo_.resize(n);
    for (int x = 0; x < n; ++x) topo_[x] = x;
    std::stable_sort(topo_.begin(), topo_.end(), [&](int a, int b) { return height[a] < height[b]; });
    order_dirty_ = false;
  }

  void enumerate(const std::vector<int>& seq, std::size_t pos, Choice& f, std::vector<Choice>& out) const {
    if (pos == seq.size()) {
      out.push_back(f);
      return;
    }
    int x = seq[pos];
    for (int s = 0; s < sizes_[x]; ++s) {
      bool ok = true;
      for (auto& [y, r] : lower_covers_[x])
        if (!r[s][f[y]]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      f[x] = s;
      enumerate(seq, pos + 1, f, out);
    }
    f[x] = -1;
  }

  std::vector<std::string> names_;
  std::vector<int> sizes_;
  std::vector<std::vector<std::pair<int, Relation>>> lower_covers_;
  std::map<std::string, int> index_;
  mutable bool order_dirty_ = true;
  mutable std::vector<std::vector<bool>> below_;
  mutable std::vector<int> topo_;
};

}  // namespace tpval
