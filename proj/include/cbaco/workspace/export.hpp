#pragma once

#include <sstream>
#include <string>

#include "cbaco/portgraph/io.hpp"
#include "cbaco/workspace/view.hpp"
#include "cbaco/workspace/visuals.hpp"

namespace cbaco::ws {

using nlohmann::json;

namespace detail {

inline json attrs_without_keys(const pg::Record& r) {
  json out = json::object();
  for (const auto& [k, v] : r)
    if (k != "Name" && k != "type" && k != "ent") out[k] = pg::to_json(v);
  return out;
}

inline const char* dot_shape(Shape s) {
  switch (s) {
    case Shape::Pentagon: return "pentagon";
    case Shape::Triangle: return "triangle";
    case Shape::Hexagon: return "hexagon";
    case Shape::Square: return "box";
    case Shape::Diamond: return "diamond";
    case Shape::Circle: return "circle";
    case Shape::Ring: return "doublecircle";
  }
  return "ellipse";
}

inline const char* dot_color(Color c) {
  switch (c) {
    case Color::yellow: return "yellow";
    case Color::blue: return "royalblue";
    case Color::green: return "green";
    case Color::light_blue: return "lightblue";
    case Color::gray: return "gray";
    case Color::red: return "red";
  }
  return "black";
}

}  // namespace detail

// The visible part of the graph with its visual attributes. Output order
// follows element ids, so equal graphs export to equal bytes.
inline json export_json(const PolicyGraph& g, const ViewFilter& f = {}) {
  Visuals vis = compute_visuals(g);
  View view = apply_view(g, f);
  json nodes = json::array(), edges = json::array();
  for (Id n : view.nodes) {
    const auto& node = g.node(n);
    json j = {{"id", n},
              {"kind", pg::string_attr(node.attrs, "type")},
              {"ent", pg::to_json(policy::node_ent(g, n))},
              {"label", policy::node_ent(g, n).str()},
              {"attrs", detail::attrs_without_keys(node.attrs)}};
    json ports = json::array();
    for (Id p : node.ports) ports.push_back({{"id", p}, {"name", pg::string_attr(g.port(p).attrs, "Name")}});
    j["ports"] = ports;
    if (auto it = vis.nodes.find(n); it != vis.nodes.end()) {
      j["shape"] = to_string(it->second.shape);
      j["color"] = to_string(it->second.color);
      j["permission"] = it->second.permission;
      j["obligation"] = it->second.obligation;
    }
    nodes.push_back(std::move(j));
  }
  for (Id e : view.edges) {
    const auto& edge = g.edge(e);
    json j = {{"id", e},
              {"type", policy::edge_type_of(g, e)},
              {"source", g.port(edge.a).node},
              {"source_port", edge.a},
              {"target", g.port(edge.b).node},
              {"target_port", edge.b},
              {"attrs", detail::attrs_without_keys(edge.attrs)}};
    if (auto it = vis.edges.find(e); it != vis.edges.end()) j["color"] = to_string(it->second.color);
    edges.push_back(std::move(j));
  }
  return {{"nodes", nodes}, {"edges", edges}};
}

inline std::string export_dot(const PolicyGraph& g, const ViewFilter& f = {}) {
  using pg::detail::dot_escape;
  Visuals vis = compute_visuals(g);
  View view = apply_view(g, f);
  std::ostringstream os;
  os << "graph policy {\n  node [style=filled, fontsize=10];\n";
  for (Id n : view.nodes) {
    os << "  n" << n << " [label=\"" << dot_escape(policy::node_ent(g, n).str()) << "\"";
    if (auto it = vis.nodes.find(n); it != vis.nodes.end())
      os << ", shape=" << detail::dot_shape(it->second.shape)
         << ", fillcolor=" << detail::dot_color(it->second.color);
    os << "];\n";
  }
  for (Id e : view.edges) {
    const auto& edge = g.edge(e);
    os << "  n" << g.port(edge.a).node << " -- n" << g.port(edge.b).node << " [label=\""
       << dot_escape(policy::edge_type_of(g, e)) << "\"";
    if (auto it = vis.edges.find(e); it != vis.edges.end())
      os << ", color=" << detail::dot_color(it->second.color);
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace cbaco::ws
