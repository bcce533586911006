#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "tpval/formulas/ast.hpp"
#include "tpval/trees/tree.hpp"

namespace tpval {

namespace formula_detail {

struct Token {
  enum Kind { Ident, Param, Int, Sym, End } kind;
  std::string text;
  int line, column;
};

inline std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    int l = line, cc = col;
    std::size_t j = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Int, s.substr(i, j - i), l, cc});
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (j < s.size() && ident_char(s[j])) ++j;
      out.push_back({Token::Ident, s.substr(i, j - i), l, cc});
    } else if (c == '$') {
      ++j;
      while (j < s.size() && ident_char(s[j])) ++j;
      if (j == i + 1) throw ParseError("expected a parameter name after '$'", l, cc);
      out.push_back({Token::Param, s.substr(i + 1, j - i - 1), l, cc});
    } else if (std::string("()[],:&|~=+-*/^").find(c) != std::string::npos) {
      j = i + 1;
      out.push_back({Token::Sym, std::string(1, c), l, cc});
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", l, cc);
    }
    advance(j - i);
  }
  out.push_back({Token::End, "", line, col});
  return out;
}

inline bool is_keyword(const std::string& s) { return s == "exists" || s == "root" || s == "in"; }

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  Formula parse_all() {
    Formula f = formula();
    if (peek().kind != Token::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

  Term parse_term_all() {
    Term t = expr();
    if (peek().kind != Token::End) fail("unexpected '" + peek().text + "'");
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool is_sym(const std::string& s) const { return peek().kind == Token::Sym && peek().text == s; }
  bool is_word(const std::string& s) const { return peek().kind == Token::Ident && peek().text == s; }

  [[noreturn]] void fail(const std::string& msg) {
    note();
    const Token& t = peek();
    throw ParseError(t.kind == Token::End ? msg + " (end of input)" : msg, t.line, t.column);
  }

  void expect_sym(const std::string& s) {
    if (!is_sym(s)) fail("expected '" + s + "'");
    ++pos_;
  }
  void expect_word(const std::string& s) {
    if (!is_word(s)) fail("expected '" + s + "'");
    ++pos_;
  }
  std::string ident() {
    if (peek().kind != Token::Ident || is_keyword(peek().text)) fail("expected an identifier");
    return toks_[pos_++].text;
  }

  Formula formula() {
    Formula f = conj();
    while (is_sym("|")) {
      ++pos_;
      f = formula::disj(f, conj());
    }
    return f;
  }

  Formula conj() {
    Formula f = neg();
    while (is_sym("&")) {
      ++pos_;
      f = formula::conj(f, neg());
    }
    return f;
  }

  Formula neg() {
    if (is_sym("~")) {
      ++pos_;
      return formula::negate(neg());
    }
    if (is_word("exists")) return binder();
    if (is_sym("(")) {
      // Either a parenthesized formula or an atom whose term starts with '('.
      std::size_t save = pos_;
      try {
        return atom();
      } catch (const ParseError& e1) {
        // Report whichever reading got further.
        std::size_t reach1 = furthest_;
        pos_ = save;
        furthest_ = save;
        try {
          ++pos_;
          Formula f = formula();
          expect_sym(")");
          furthest_ = std::max(furthest_, reach1);
          return f;
        } catch (const ParseError&) {
          std::size_t reach2 = furthest_;
          furthest_ = std::max(reach1, reach2);
          if (reach1 > reach2) throw e1;
          throw;
        }
      }
    }
    return atom();
  }

  /// The body extends as far right as possible.
  Formula binder() {
    expect_word("exists");
    std::string v = ident();
    expect_word("root");
    QPoly q = polylit();
    expect_sym(":");
    return formula::exists_root(v, q, formula());
  }

  QPoly polylit() {
    const Token& start = peek();
    expect_sym("[");
    QPoly q;
    while (true) {
      bool minus = false;
      if (is_sym("-")) {
        minus = true;
        ++pos_;
      }
      if (peek().kind != Token::Int) fail("expected a rational coefficient");
      Integer num(toks_[pos_++].text);
      Integer den(1);
      if (is_sym("/")) {
        ++pos_;
        if (peek().kind != Token::Int) fail("expected a denominator");
        den = Integer(toks_[pos_++].text);
        if (den == 0) fail("zero denominator");
      }
      q.push_back(make_rational(minus ? Integer(-num) : num, den));
      if (is_sym(",")) {
        ++pos_;
        continue;
      }
      expect_sym("]");
      break;
    }
    poly::trim(QQ, q);
    if (q.size() < 2 || q.back() != 1)
      throw ParseError("binder polynomial must be monic of degree >= 1", start.line, start.column);
    return q;
  }

  Formula atom() {
    Term t = expr();
    if (is_sym("=")) {
      ++pos_;
      if (peek().kind != Token::Int || peek().text.find_first_not_of('0') != std::string::npos)
        fail("expected '0' after '='");
      ++pos_;
      note();
      return formula::is_zero(t);
    }
    if (is_word("in")) {
      ++pos_;
      bool maximal;
      if (is_word("O")) maximal = false;
      else if (is_word("m")) maximal = true;
      else fail("expected 'O' or 'm'");
      ++pos_;
      expect_sym("[");
      std::string node = ident();
      expect_sym("]");
      note();
      return maximal ? formula::in_m(t, node) : formula::in_O(t, node);
    }
    fail("expected '= 0' or 'in'");
  }

  Term expr() {
    Term t = product();
    while (is_sym("+") || is_sym("-")) {
      bool plus = is_sym("+");
      ++pos_;
      Term r = product();
      t = plus ? term::add(t, r) : term::sub(t, r);
    }
    note();
    return t;
  }

  Term product() {
    Term t = unary();
    while (is_sym("*") || is_sym("/")) {
      bool times = is_sym("*");
      ++pos_;
      Term r = unary();
      t = times ? term::mul(t, r) : term::div(t, r);
    }
    return t;
  }

  Term unary() {
    if (is_sym("-")) {
      ++pos_;
      return term::neg(unary());
    }
    Term b = primary();
    if (is_sym("^")) {
      ++pos_;
      if (peek().kind != Token::Int) fail("expected a nonnegative integer exponent");
      const std::string& e = toks_[pos_].text;
      if (e.size() > 6) fail("exponent too large");
      ++pos_;
      note();
      return term::pow(b, std::stoul(e));
    }
    return b;
  }

  Term primary() {
    const Token& t = peek();
    note();
    if (t.kind == Token::Int) {
      ++pos_;
      return term::integer(Integer(t.text));
    }
    if (t.kind == Token::Param) {
      ++pos_;
      return term::param(t.text);
    }
    if (t.kind == Token::Ident) {
      if (is_keyword(t.text)) fail("unexpected keyword '" + t.text + "'");
      ++pos_;
      return term::var(t.text);
    }
    if (is_sym("(")) {
      ++pos_;
      Term inner = expr();
      expect_sym(")");
      return inner;
    }
    fail("expected a term");
  }

  void note() { furthest_ = std::max(furthest_, pos_); }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t furthest_ = 0;
};

}  // namespace formula_detail

/// Checks that every variable is bound and, given a tree, that every node
/// named in an atom exists.
inline void check_formula(const Formula& f, const FiniteTree* tree = nullptr, const std::set<std::string>& allowed_free = {}) {
  std::set<std::string> free;
  formula::free_vars(f, free);
  for (auto& v : free)
    if (!allowed_free.count(v)) throw ParseError("unbound variable '" + v + "'");
  if (tree) {
    std::set<std::string> ns;
    formula::nodes(f, ns);
    for (auto& n : ns)
      if (n != "_" && !tree->contains(n)) throw ParseError("unknown node '" + n + "'");
  }
}

inline Formula parse_formula(const std::string& text, const FiniteTree* tree = nullptr,
                             const std::set<std::string>& allowed_free = {}) {
  Formula f = formula_detail::Parser(text).parse_all();
  check_formula(f, tree, allowed_free);
  return f;
}

/// A bare term, as used for parameter values.
inline Term parse_term(const std::string& text) { return formula_detail::Parser(text).parse_term_all(); }

}  // namespace tpval
