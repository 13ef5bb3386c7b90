#pragma once

#include <set>
#include <string>
#include <vector>

#include "cbaco/portgraph/graph.hpp"

namespace cbaco::strat {

using pg::ElementKind;
using pg::Value;

enum class Op {
  rule,       // bare rule name, meaning one(rule)
  one,
  all,
  repeat,
  while_do,   // kids: condition, body
  not_,
  is_empty,
  set_pos,
  set_ban,
  seq,        // n-ary
  set_union,  // binary
  set_diff,   // binary
  ngb,        // kids: source; kind + predicate
  property,   // kids: source; kind + predicate
  crt_graph,
  crt_pos,
  crt_ban,
};

// attr == literal
struct Predicate {
  std::string attr;
  Value literal;

  bool operator==(const Predicate&) const = default;
};

struct Expr {
  Op op = Op::rule;
  std::string name;  // rule name for Op::rule
  std::vector<Expr> kids;
  ElementKind kind = ElementKind::node;
  Predicate pred;

  bool operator==(const Expr&) const = default;
};

inline const char* keyword(Op op) {
  switch (op) {
    case Op::one: return "one";
    case Op::all: return "all";
    case Op::repeat: return "repeat";
    case Op::while_do: return "while";
    case Op::not_: return "not";
    case Op::is_empty: return "isEmpty";
    case Op::set_pos: return "setPos";
    case Op::set_ban: return "setBan";
    case Op::ngb: return "ngb";
    case Op::property: return "property";
    case Op::crt_graph: return "crtGraph";
    case Op::crt_pos: return "crtPos";
    case Op::crt_ban: return "crtBan";
    default: return "";
  }
}

inline const char* kind_name(ElementKind k) {
  switch (k) {
    case ElementKind::node: return "node";
    case ElementKind::port: return "port";
    case ElementKind::edge: return "edge";
  }
  return "node";
}

inline void collect_rule_names(const Expr& e, std::set<std::string>& out) {
  if (e.op == Op::rule) out.insert(e.name);
  for (const auto& k : e.kids) collect_rule_names(k, out);
}

namespace detail {

inline std::string literal_text(const Value& v) {
  if (v.is_string()) {
    std::string out = "\"";
    for (char c : v.as_string()) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  }
  return v.str();
}

}  // namespace detail

// Concrete syntax accepted by parse_strategy.
inline std::string to_string(const Expr& e) {
  auto wrap = [](const Expr& k, bool need) {
    return need ? "(" + to_string(k) + ")" : to_string(k);
  };
  switch (e.op) {
    case Op::rule:
      return e.name;
    case Op::crt_graph:
    case Op::crt_pos:
    case Op::crt_ban:
      return keyword(e.op);
    case Op::while_do:
      return "while(" + to_string(e.kids[0]) + ")do(" + to_string(e.kids[1]) + ")";
    case Op::ngb:
    case Op::property:
      return std::string(keyword(e.op)) + "(" + to_string(e.kids[0]) + "," +
             kind_name(e.kind) + "," + e.pred.attr +
             "==" + detail::literal_text(e.pred.literal) + ")";
    case Op::seq: {
      std::string out;
      for (std::size_t i = 0; i < e.kids.size(); ++i) {
        if (i) out += ";";
        out += wrap(e.kids[i], e.kids[i].op == Op::seq);
      }
      return out;
    }
    case Op::set_union:
    case Op::set_diff: {
      const Expr& l = e.kids[0];
      const Expr& r = e.kids[1];
      bool rn = r.op == Op::seq || r.op == Op::set_union || r.op == Op::set_diff;
      return wrap(l, l.op == Op::seq) + (e.op == Op::set_union ? "[cup]" : "\\") +
             wrap(r, rn);
    }
    default:
      return std::string(keyword(e.op)) + "(" + to_string(e.kids[0]) + ")";
  }
}

}  // namespace cbaco::strat
