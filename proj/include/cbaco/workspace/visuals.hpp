#pragma once

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cbaco/policy/validate.hpp"

namespace cbaco::ws {

using policy::Id;
using policy::Kind;
using policy::PolicyGraph;
using policy::PolicyIndex;
using pg::Value;

enum class Shape { Pentagon, Triangle, Hexagon, Square, Diamond, Circle, Ring };
enum class Color { yellow, blue, green, light_blue, gray, red };

inline const char* to_string(Shape s) {
  switch (s) {
    case Shape::Pentagon: return "pentagon";
    case Shape::Triangle: return "triangle";
    case Shape::Hexagon: return "hexagon";
    case Shape::Square: return "square";
    case Shape::Diamond: return "diamond";
    case Shape::Circle: return "circle";
    case Shape::Ring: return "ring";
  }
  return "?";
}

inline const char* to_string(Color c) {
  switch (c) {
    case Color::yellow: return "yellow";
    case Color::blue: return "blue";
    case Color::green: return "green";
    case Color::light_blue: return "light-blue";
    case Color::gray: return "gray";
    case Color::red: return "red";
  }
  return "?";
}

inline Shape shape_of(Kind k) {
  switch (k) {
    case Kind::P: return Shape::Pentagon;
    case Kind::C: return Shape::Triangle;
    case Kind::A: return Shape::Square;
    case Kind::R: return Shape::Diamond;
    case Kind::E: return Shape::Circle;
    case Kind::G: return Shape::Ring;
    case Kind::Pr:
    case Kind::O:
    case Kind::D: return Shape::Hexagon;
  }
  return Shape::Hexagon;
}

struct NodeVisual {
  Shape shape;
  std::vector<std::string> ports;  // port names in order: main, then In/Out
  Color color;
  bool permission = false;  // member of the permission/prohibition structure
  bool obligation = false;  // member of the obligation structure
};

struct EdgeVisual {
  Color color;
};

struct Visuals {
  std::map<Id, NodeVisual> nodes;
  std::map<Id, EdgeVisual> edges;
};

namespace detail {

// Edges leading from an entity to the entities it is made of or applies to.
// Membership in a structure spreads along these, starting from the endpoints
// of the structure's own edges. Categories pass membership to their principals
// and, through CC edges carrying the matching flag, to their subcategories.
// Schemes pass it to more specific schemes and to the events instantiating
// them.
inline bool spreads(const PolicyIndex& idx, Id from, Id edge, const char* cc_flag) {
  Kind a = *idx.kind(from);
  std::string t = idx.type(edge);
  if (t == "PC") return a == Kind::C;
  if (t == "CC") return idx.flag(edge, cc_flag) && idx.targets(edge, from);
  if (t == "GG") return idx.targets(edge, from);
  if (t == "PrA" || t == "PrR") return a == Kind::Pr;
  if (t == "OPr") return a == Kind::O;
  if (t == "OG") return a == Kind::O;
  if (t == "EG") return a == Kind::G;
  if (t == "EP" || t == "EA" || t == "ER") return a == Kind::E;
  if (t == "DP" || t == "DPr" || t == "DE") return a == Kind::D;
  return false;
}

inline std::set<Id> members(const PolicyIndex& idx, const std::set<std::string>& seed_types,
                            const std::set<Kind>& seed_kinds, const char* cc_flag) {
  std::set<Id> in;
  std::deque<Id> todo;
  auto add = [&](Id n) {
    if (in.insert(n).second) todo.push_back(n);
  };
  for (Id e : idx.edges())
    if (seed_types.count(idx.type(e))) {
      auto [a, b] = idx.ends(e);
      add(a);
      add(b);
    }
  for (Kind k : seed_kinds)
    for (Id n : idx.nodes_of(k)) add(n);
  while (!todo.empty()) {
    Id n = todo.front();
    todo.pop_front();
    for (const auto& l : idx.links(n))
      if (spreads(idx, n, l.edge, cc_flag)) add(l.other);
  }
  return in;
}

}  // namespace detail

// Shapes, ports and colors for every typed node and every non-auxiliary edge.
// A node is yellow if it belongs only to the permission/prohibition structure
// (or to neither), blue if only to the obligation structure, green if both;
// the event marked now is light-blue.
inline Visuals compute_visuals(const PolicyGraph& g) {
  auto vs = policy::validate(g);
  if (!vs.empty()) {
    std::vector<std::string> details;
    for (const auto& v : vs) details.push_back(v.code + ": " + v.message);
    throw NotWellFormed("cannot compute visuals of an ill-formed graph", details);
  }
  PolicyIndex idx(g);
  auto perm = detail::members(idx, {"CPr"}, {}, "auth");
  auto obl = detail::members(idx, {"CO", "OG", "DE"}, {Kind::O, Kind::D}, "obl");

  Visuals out;
  for (Kind k : policy::all_kinds)
    for (Id n : idx.nodes_of(k)) {
      NodeVisual v{shape_of(k), {policy::main_port}, Color::yellow, perm.count(n) > 0,
                   obl.count(n) > 0};
      if (policy::has_direction_ports(k)) v.ports = {policy::main_port, policy::in_port, policy::out_port};
      if (v.obligation) v.color = v.permission ? Color::green : Color::blue;
      if (k == Kind::E) {
        const Value* now = pg::find_attr(g.node(n).attrs, "now");
        if (now && now->is_bool() && now->as_bool()) v.color = Color::light_blue;
      }
      out.nodes.emplace(n, std::move(v));
    }
  for (Id e : idx.edges()) {
    std::string t = idx.type(e);
    Color c = Color::gray;
    if (t == "CPr") c = idx.text(e, "auth") == "A" ? Color::green : Color::red;
    if (t == "OG") c = idx.text(e, "ge") == "i" ? Color::green : Color::red;
    if (t == "DE") c = idx.text(e, "ev") == "i" ? Color::green : Color::red;
    out.edges.emplace(e, EdgeVisual{c});
  }
  return out;
}

}  // namespace cbaco::ws
