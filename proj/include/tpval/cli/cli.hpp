#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tpval/decide/decide.hpp"

namespace tpval::cli {

enum ExitCode { Ok = 0, Usage = 1, Parse = 2, Resource = 3, Precondition = 4, Invariant = 5 };

struct RunConfig {
  std::string command;
  Limits limits;
  std::string format = "text";  // text | lines
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// First non-comment line of a field file.
inline Field read_field(const std::string& path) {
  std::istringstream is(read_file(path));
  std::string line;
  while (std::getline(is, line)) {
    std::string t = text::trim(text::strip_comment(line));
    if (!t.empty()) return Field::parse(t);
  }
  throw ParseError("field file '" + path + "' is empty");
}

/// Formula files may hold `#` comment lines; the rest is one formula.
inline std::string read_formula_text(const std::string& path) {
  std::istringstream is(read_file(path));
  std::string line, out;
  while (std::getline(is, line)) {
    std::string t = text::trim(line);
    if (t.empty() || t[0] == '#') continue;
    out += t + " ";
  }
  return out;
}

inline FieldEmbedding embedding_into(const NumberField& k, const NumberField& l) {
  auto e = find_embedding(k, l);
  if (!e) throw PreconditionError(k.label() + " does not embed into " + l.label());
  return *e;
}

inline std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

inline std::string format_value(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline int cmd_extensions(const RunConfig& cfg, const std::string& structure, const std::string& field,
                          const std::string& split, std::ostream& out) {
  auto s = TP0Structure::parse(read_file(structure), cfg.limits);
  const NumberField& k = s.field().constants;
  FieldEmbedding emb = FieldEmbedding::identity(k);
  if (!split.empty()) {
    QPoly f = text::parse_polylit(split);
    emb = splitting_field(k, to_kpoly(k, f), cfg.limits).base;
  } else if (!field.empty()) {
    emb = embedding_into(k, read_field(field).constants);
  }
  auto ext = enumerate_structure_extensions(s, emb, cfg.limits);
  const FiniteTree& t = s.tree();
  for (std::size_t i = 0; i < ext.members.size(); ++i) {
    const auto& m = ext.members[i];
    if (cfg.format == "lines") {
      out << "extension=" << i;
      for (int x : t.order())
        if (x != 0) out << " " << t.name(x) << "=[" << m.at(x).serialize() << "]";
      out << "\n";
    } else {
      out << "[" << i << "]";
      for (int x : t.order())
        if (x != 0) out << "  " << t.name(x) << ": " << m.at(x).serialize();
      out << "\n";
    }
  }
  out << "count=" << ext.members.size() << " field=" << ext.overfield.label() << "\n";
  return Ok;
}

inline int cmd_measure(const RunConfig& cfg, const std::string& structure, const std::string& formula_path,
                       const std::string& expr, const std::vector<std::string>& binds, const std::string& over,
                       std::ostream& out) {
  auto s = TP0Structure::parse(read_file(structure), cfg.limits);
  std::string text = expr.empty() ? read_formula_text(formula_path) : expr;
  Formula phi = parse_formula(text, &s.tree());
  Bindings b;
  for (auto& kv : binds) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("--bind expects name=value, got '" + kv + "'");
    std::string name = kv.substr(0, eq);
    if (name[0] == '$') name = name.substr(1);
    b.insert_or_assign(name, parse_element(s.field(), kv.substr(eq + 1)));
  }
  MeasureResult m = over.empty() ? measure(phi, b, s, cfg.limits)
                                 : measure_over(phi, b, s, embedding_into(s.field().constants, read_field(over).constants),
                                                cfg.limits);
  if (cfg.format == "text") out << "formula: " << formula::print(phi) << "\n";
  out << "value=" << format_value(m.value) << " extensions=" << m.total << " true=" << m.true_count
      << " field=" << m.field_label(s.field().function_field) << "\n";
  return Ok;
}

inline int cmd_decide(const RunConfig& cfg, const std::string& path, const std::string& witness_path, std::ostream& out) {
  auto f = parse_sentence_file(read_file(path));
  auto v = decide_psi(f.sentence, f.tree, f.chi, cfg.limits);
  out << "consistent=" << (v.consistent ? "true" : "false");
  if (v.degenerate) out << " degenerate=true";
  else out << " field=" << v.field.label();
  out << "\n";
  for (auto& [a, nv] : v.per_node) {
    out << "node=" << a << " char=" << nv.p << " satisfiable=" << (nv.satisfiable ? "true" : "false");
    if (nv.witness) out << " root=" << nv.witness->root_index << " valuation=[" << nv.witness->valuation << "]";
    out << "\n";
  }
  if (v.witness_structure) {
    if (!witness_path.empty()) {
      std::ofstream w(witness_path);
      if (!w) throw PreconditionError("cannot write '" + witness_path + "'");
      w << v.witness_structure->serialize();
      out << "witness=" << witness_path << "\n";
    } else if (cfg.format == "text") {
      out << "witness:\n" << v.witness_structure->serialize();
    }
  }
  return Ok;
}

inline int cmd_fibers(const RunConfig& cfg, const std::string& base, const std::string& top, const std::string& field,
                      std::ostream& out) {
  auto sk = TP0Structure::parse(read_file(base), cfg.limits);
  auto sl = TP0Structure::parse(read_file(top), cfg.limits);
  auto emb = embedding_into(sk.field().constants, read_field(field).constants);
  auto r = fiber_report(sk, sl, emb, cfg.limits);
  out << "fibers=" << join_sizes(r.sizes) << " uniform=" << (r.uniform ? "true" : "false")
      << " base_extensions=" << r.count_k << " top_extensions=" << r.count_l << " ratio=" << format_value(r.ratio)
      << "\n";
  return r.uniform ? Ok : Invariant;
}

inline int cmd_smooth(const RunConfig&, const std::string& path, const std::string& element, std::ostream& out) {
  auto cs = ChoiceSystem::parse(read_file(path));
  if (!element.empty()) cs.index(element);
  bool all = true;
  for (int x : cs.topological_order()) {
    if (!element.empty() && cs.name(x) != element) continue;
    auto n = cs.check_smooth_at(x);
    all = all && n.has_value();
    out << "element=" << cs.name(x) << " smooth=" << (n ? "true" : "false");
    if (n) out << " fiber=" << *n;
    out << "\n";
  }
  out << "smooth=" << (all ? "true" : "false") << "\n";
  return Ok;
}

inline int cmd_parse(const RunConfig&, const std::string& path, const std::string& expr, std::ostream& out) {
  Formula phi = parse_formula(expr.empty() ? read_formula_text(path) : expr);
  out << formula::print(phi) << "\n";
  return Ok;
}

/// Parses argv and runs one command. Library errors map to exit codes
/// 2 (parse), 3 (resource), 4 (precondition), 5 (invariant).
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Exact computations with trees of valuation rings", "tpval"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--degree-bound", cfg.limits.degree_bound, "Largest polynomial degree for a splitting field")
      ->check(CLI::PositiveNumber);
  app.add_option("--field-degree-bound", cfg.limits.field_degree_bound, "Largest absolute degree of a constructed field")
      ->check(CLI::PositiveNumber);
  app.add_option("--precision", cfg.limits.precision, "Starting p-adic precision")->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "lines"}));

  std::string structure, field, split, formula_path, expr, over, sentence, witness, base, top, system, element;
  std::vector<std::string> binds;

  auto* ext = app.add_subcommand("extensions", "List the structure extensions along K -> L");
  ext->add_option("structure", structure, "Structure file")->required();
  ext->add_option("field", field, "Field file for L");
  ext->add_option("--split", split, "Take L to be the splitting field of this polynomial");

  auto* meas = app.add_subcommand("measure", "Measure of a formula over a structure");
  meas->add_option("structure", structure, "Structure file")->required();
  meas->add_option("formula", formula_path, "Formula file");
  meas->add_option("-e,--expr", expr, "Formula text");
  meas->add_option("--bind", binds, "Parameter value, name=value");
  meas->add_option("--over", over, "Field file for a larger normal extension to average over");

  auto* dec = app.add_subcommand("decide", "Decide a sentence of the root-condition fragment");
  dec->add_option("sentence", sentence, "Sentence file")->required();
  dec->add_option("--witness", witness, "Write the witness structure here");

  auto* fib = app.add_subcommand("fibers", "Fiber sizes of the restriction map");
  fib->add_option("base", base, "Structure S_K")->required();
  fib->add_option("top", top, "Structure S_L")->required();
  fib->add_option("field", field, "Field file for K'")->required();

  auto* sm = app.add_subcommand("smooth", "Smoothness of a choice system");
  sm->add_option("system", system, "Choice system file")->required();
  sm->add_option("--element", element, "Check one element only");

  auto* par = app.add_subcommand("parse", "Echo a formula in normal form");
  par->add_option("formula", formula_path, "Formula file");
  par->add_option("-e,--expr", expr, "Formula text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return Ok;
    }
    err << "error: " << e.what() << "\n";
    return Usage;
  }

  try {
    if (*ext) return cmd_extensions(cfg, structure, field, split, out);
    if (*meas || *par) {
      if (formula_path.empty() == expr.empty()) {
        err << "error: give exactly one of a formula file or --expr\n";
        return Usage;
      }
      if (*meas) return cmd_measure(cfg, structure, formula_path, expr, binds, over, out);
      return cmd_parse(cfg, formula_path, expr, out);
    }
    if (*dec) return cmd_decide(cfg, sentence, witness, out);
    if (*fib) return cmd_fibers(cfg, base, top, field, out);
    if (*sm) return cmd_smooth(cfg, system, element, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return Parse;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return Resource;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << "\n";
    return Precondition;
  } catch (const InvariantViolation& e) {
    err << "invariant violated: " << e.what() << "\n";
    return Invariant;
  }
  return Usage;
}

}  // namespace tpval::cli
