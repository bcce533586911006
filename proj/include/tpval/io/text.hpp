#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "tpval/algebra/rational_poly.hpp"

namespace tpval::text {

inline std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r\n"), b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

inline bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string part;
  while (std::getline(is, part, sep)) out.push_back(trim(part));
  return out;
}

/// Drops a trailing `# comment`.
inline std::string strip_comment(const std::string& line) {
  auto h = line.find('#');
  return h == std::string::npos ? line : line.substr(0, h);
}

inline Rational parse_rational(const std::string& s) {
  std::string t = trim(s);
  if (t.empty() || t.find_first_not_of("+-0123456789/") != std::string::npos)
    throw ParseError("malformed rational '" + s + "'");
  if (t[0] == '+') t = t.substr(1);
  try {
    Rational q(t);
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw ParseError("malformed rational '" + s + "'");
  }
}

/// `[c0,c1,...,cn]`, constant term first.
inline QPoly parse_polylit(const std::string& s) {
  std::string t = trim(s);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    throw ParseError("expected a coefficient list like [1,0,1], got '" + s + "'");
  QPoly r;
  std::string body = trim(t.substr(1, t.size() - 2));
  if (!body.empty())
    for (auto& c : split(body, ',')) r.push_back(parse_rational(c));
  poly::trim(QQ, r);
  return r;
}

inline std::string format_polylit(const QPoly& f) { return format_qpoly(f); }

}  // namespace tpval::text
