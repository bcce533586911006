#pragma once

#include <compare>
#include <sstream>
#include <string>
#include <vector>

#include "tpval/algebra/integer.hpp"

namespace tpval {

/// A value in a lexicographically ordered Q^r, or infinity (the value of 0).
struct ValueVec {
  bool infinite = false;
  std::vector<Rational> entries;

  static ValueVec infinity(std::size_t rank = 1) { return {true, std::vector<Rational>(rank)}; }
  static ValueVec of(const Rational& v) { return {false, {v}}; }
  static ValueVec of(std::vector<Rational> v) { return {false, std::move(v)}; }
  static ValueVec zero(std::size_t rank = 1) { return {false, std::vector<Rational>(rank)}; }

  std::size_t rank() const { return entries.size(); }

  /// -1, 0, +1 against the zero vector; infinity counts as positive.
  int sign() const {
    if (infinite) return 1;
    for (auto& e : entries)
      if (e != 0) return e > 0 ? 1 : -1;
    return 0;
  }

  friend ValueVec operator+(const ValueVec& a, const ValueVec& b) {
    if (a.infinite || b.infinite) return infinity(std::max(a.rank(), b.rank()));
    if (a.rank() != b.rank()) throw InvariantViolation("value rank mismatch");
    ValueVec r = a;
    for (std::size_t i = 0; i < r.entries.size(); ++i) r.entries[i] += b.entries[i];
    return r;
  }
  friend ValueVec operator-(const ValueVec& a) {
    if (a.infinite) throw PreconditionError("negating an infinite value");
    ValueVec r = a;
    for (auto& e : r.entries) e = -e;
    return r;
  }

  friend bool operator==(const ValueVec& a, const ValueVec& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.entries == b.entries;
  }
  friend std::strong_ordering operator<=>(const ValueVec& a, const ValueVec& b) {
    if (a.infinite || b.infinite) {
      if (a.infinite && b.infinite) return std::strong_ordering::equal;
      return a.infinite ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    for (std::size_t i = 0; i < std::min(a.rank(), b.rank()); ++i) {
      int c = cmp(a.entries[i], b.entries[i]);
      if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return a.rank() <=> b.rank();
  }

  std::string format() const {
    if (infinite) return "inf";
    if (rank() == 1) return entries[0].get_str();
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < rank(); ++i) os << (i ? "," : "") << entries[i].get_str();
    os << ")";
    return os.str();
  }
  friend std::ostream& operator<<(std::ostream& os, const ValueVec& v) { return os << v.format(); }
};

/// Where an element sits relative to a valuation ring O with maximal ideal m.
enum class Membership { InMaximalIdeal, Unit, OutsideRing };

inline Membership membership_of(const ValueVec& v) {
  int s = v.sign();
  return s > 0 ? Membership::InMaximalIdeal : (s == 0 ? Membership::Unit : Membership::OutsideRing);
}

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::InMaximalIdeal: return "in_maximal_ideal";
    case Membership::Unit: return "unit";
    default: return "outside_ring";
  }
}

}  // namespace tpval
