#pragma once

#include <sstream>
#include <string>

#include "json.hpp"

#include "cbaco/portgraph/graph.hpp"

namespace cbaco::pg {

using json = nlohmann::json;

// Values map onto JSON directly: bottom is null, tuples are arrays and
// variables are {"var": name}.
inline json to_json(const Value& v) {
  if (v.is_bottom()) return nullptr;
  if (v.is_bool()) return v.as_bool();
  if (v.is_int()) return v.as_int();
  if (v.is_string()) return v.as_string();
  if (v.is_var()) return json{{"var", v.as_var().name}};
  json arr = json::array();
  for (const auto& x : v.as_tuple()) arr.push_back(to_json(x));
  return arr;
}

inline Value value_from_json(const json& j) {
  if (j.is_null()) return Value();
  if (j.is_boolean()) return Value(j.get<bool>());
  if (j.is_number_integer()) return Value(j.get<std::int64_t>());
  if (j.is_string()) return Value(j.get<std::string>());
  if (j.is_array()) {
    Value::Tuple t;
    for (const auto& x : j) t.push_back(value_from_json(x));
    return Value(std::move(t));
  }
  if (j.is_object() && j.size() == 1 && j.contains("var") && j["var"].is_string())
    return Value::var(j["var"].get<std::string>());
  throw ParseError("unsupported attribute value: " + j.dump());
}

inline json to_json(const Record& r) {
  json out = json::object();
  for (const auto& [k, v] : r) out[k] = to_json(v);
  return out;
}

inline Record record_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("attribute record must be an object");
  Record r;
  for (const auto& [k, v] : j.items()) r.emplace(k, value_from_json(v));
  return r;
}

inline json to_json(const PortGraph& g) {
  json nodes = json::array();
  for (const auto& [id, n] : g.nodes()) {
    json ports = json::array();
    for (Id p : n.ports)
      ports.push_back({{"id", p}, {"attrs", to_json(g.port(p).attrs)}});
    nodes.push_back({{"id", id}, {"attrs", to_json(n.attrs)}, {"ports", ports}});
  }
  json edges = json::array();
  for (const auto& [id, e] : g.edges())
    edges.push_back(
        {{"id", id}, {"a", e.a}, {"b", e.b}, {"attrs", to_json(e.attrs)}});
  return {{"nodes", nodes}, {"edges", edges}};
}

// Ids in the document are only used to resolve edge endpoints; the result
// gets fresh ids.
inline PortGraph graph_from_json(const json& j) {
  try {
    PortGraph g;
    std::map<Id, Id> port_ids;
    for (const auto& n : j.at("nodes")) {
      Id nid = g.add_node(record_from_json(n.value("attrs", json::object())));
      for (const auto& p : n.value("ports", json::array()))
        port_ids[p.at("id").get<Id>()] =
            g.add_port(nid, record_from_json(p.value("attrs", json::object())));
    }
    for (const auto& e : j.value("edges", json::array())) {
      auto a = port_ids.find(e.at("a").get<Id>());
      auto b = port_ids.find(e.at("b").get<Id>());
      if (a == port_ids.end() || b == port_ids.end())
        throw ParseError("edge refers to an unknown port");
      g.add_edge(a->second, b->second,
                 record_from_json(e.value("attrs", json::object())));
    }
    return g;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed graph document: ") + ex.what());
  }
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

// Plain DOT rendering for debugging: one record-shaped node per graph node,
// ports as record fields.
inline std::string to_dot(const PortGraph& g) {
  std::ostringstream os;
  os << "graph G {\n  node [shape=record];\n";
  for (const auto& [id, n] : g.nodes()) {
    os << "  n" << id << " [label=\"{" << detail::dot_escape(record_repr(n.attrs));
    if (!n.ports.empty()) {
      os << "|{";
      for (std::size_t i = 0; i < n.ports.size(); ++i) {
        if (i) os << '|';
        os << "<p" << n.ports[i] << "> "
           << detail::dot_escape(string_attr(g.port(n.ports[i]).attrs, "Name"));
      }
      os << '}';
    }
    os << "}\"];\n";
  }
  for (const auto& [id, e] : g.edges())
    os << "  n" << g.port(e.a).node << ":p" << e.a << " -- n"
       << g.port(e.b).node << ":p" << e.b << " [label=\""
       << detail::dot_escape(record_repr(e.attrs)) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace cbaco::pg
