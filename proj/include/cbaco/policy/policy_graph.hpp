#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cbaco/error.hpp"
#include "cbaco/policy/entity.hpp"
#include "cbaco/portgraph/graph.hpp"

namespace cbaco::policy {

using pg::Id;
using pg::IdSet;
using pg::PortGraph;
using pg::Record;

// A policy graph is a port graph whose node records carry {Name, type, ent}
// and whose edge records carry {Name, type} plus the per-type attributes.
using PolicyGraph = PortGraph;

inline Id add_entity(PolicyGraph& g, Kind k, Value ent, Record extra = {}) {
  Record r = std::move(extra);
  r["Name"] = Value(to_string(k));
  r["type"] = Value(to_string(k));
  r["ent"] = std::move(ent);
  Id n = g.add_node(std::move(r));
  g.add_port(n, {{"Name", main_port}});
  if (has_direction_ports(k)) {
    g.add_port(n, {{"Name", in_port}});
    g.add_port(n, {{"Name", out_port}});
  }
  return n;
}

inline std::optional<Kind> node_kind(const PolicyGraph& g, Id n) {
  return kind_from_string(pg::string_attr(g.node(n).attrs, "type"));
}

inline const Value& node_ent(const PolicyGraph& g, Id n) {
  static const Value bottom;
  const Value* v = pg::find_attr(g.node(n).attrs, "ent");
  return v ? *v : bottom;
}

// Whether the node's ent is (in) the edge's target.
inline bool in_target(const Value& target, const Value& ent) {
  if (target.is_tuple()) {
    for (const auto& t : target.as_tuple())
      if (t == ent) return true;
    return false;
  }
  return target == ent;
}

// Joins two entity nodes with an edge of the type their kinds dictate.
// Directed edges land on the In port of a target node and the Out port of
// the other; everything else uses the main ports.
inline Id connect(PolicyGraph& g, Id n1, Id n2, Record attrs = {}) {
  auto k1 = node_kind(g, n1), k2 = node_kind(g, n2);
  if (!k1 || !k2) throw TypeError("connect: untyped node", std::to_string(!k1 ? n1 : n2));
  auto t = edge_type(*k1, *k2);
  if (!t)
    throw TypeError(std::string("no edge type joins ") + to_string(*k1) + " and " +
                        to_string(*k2),
                    node_ent(g, n1).str() + " / " + node_ent(g, n2).str());
  attrs["Name"] = Value(*t);
  attrs["type"] = Value(*t);
  auto port_for = [&](Id n) -> Id {
    std::string name = main_port;
    if (is_directed_type(*t)) {
      const Value* target = pg::find_attr(attrs, "target");
      name = target && in_target(*target, node_ent(g, n)) ? in_port : out_port;
    }
    auto p = g.find_port(n, name);
    if (!p) throw TypeError("node lacks port " + name, node_ent(g, n).str());
    return *p;
  };
  Id p1 = port_for(n1), p2 = port_for(n2);
  return g.add_edge(p1, p2, std::move(attrs));
}

inline std::string edge_type_of(const PolicyGraph& g, Id e) {
  return pg::string_attr(g.edge(e).attrs, "type");
}

inline bool is_aux(const PolicyGraph& g, Id e) {
  const Value* v = pg::find_attr(g.edge(e).attrs, "aux");
  return v && v->is_bool() && v->as_bool();
}

// Read-only lookup structure over a policy graph. Auxiliary edges are left
// out unless asked for; edges touching untyped nodes are always left out.
class PolicyIndex {
 public:
  struct Link {
    Id edge;
    Id other;
  };

  explicit PolicyIndex(const PolicyGraph& g, bool include_aux = false) : g_(g) {
    for (const auto& [id, n] : g.nodes()) {
      auto k = node_kind(g, id);
      if (!k) continue;
      kinds_[id] = *k;
      by_kind_[*k].push_back(id);
      lookup_.emplace(std::make_pair(*k, node_ent(g, id)), id);
      adj_[id];
    }
    for (const auto& [id, e] : g.edges()) {
      if (!include_aux && is_aux(g, id)) continue;
      Id a = g.port(e.a).node, b = g.port(e.b).node;
      if (!kinds_.count(a) || !kinds_.count(b)) continue;
      adj_[a].push_back({id, b});
      if (a != b) adj_[b].push_back({id, a});
      edges_.push_back(id);
    }
  }

  const PolicyGraph& graph() const { return g_; }

  std::optional<Kind> kind(Id n) const {
    auto it = kinds_.find(n);
    if (it == kinds_.end()) return std::nullopt;
    return it->second;
  }

  const Value& ent(Id n) const { return node_ent(g_, n); }

  std::optional<Id> find(Kind k, const Value& ent) const {
    auto it = lookup_.find({k, ent});
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<Id>& nodes_of(Kind k) const {
    static const std::vector<Id> none;
    auto it = by_kind_.find(k);
    return it == by_kind_.end() ? none : it->second;
  }

  const std::vector<Link>& links(Id n) const {
    static const std::vector<Link> none;
    auto it = adj_.find(n);
    return it == adj_.end() ? none : it->second;
  }

  // Non-auxiliary edges (unless built with include_aux), ascending ids.
  const std::vector<Id>& edges() const { return edges_; }

  std::string type(Id e) const { return edge_type_of(g_, e); }

  const Value* attr(Id e, const std::string& key) const {
    return pg::find_attr(g_.edge(e).attrs, key);
  }

  bool flag(Id e, const std::string& key) const {
    const Value* v = attr(e, key);
    return v && v->is_bool() && v->as_bool();
  }

  std::string text(Id e, const std::string& key) const {
    return pg::string_attr(g_.edge(e).attrs, key);
  }

  bool has_target(Id e) const { return attr(e, "target") != nullptr; }

  bool targets(Id e, Id node) const {
    const Value* t = attr(e, "target");
    return t && in_target(*t, ent(node));
  }

  std::pair<Id, Id> ends(Id e) const {
    const auto& d = g_.edge(e);
    return {g_.port(d.a).node, g_.port(d.b).node};
  }

 private:
  const PolicyGraph& g_;
  std::map<Id, Kind> kinds_;
  std::map<Kind, std::vector<Id>> by_kind_;
  std::map<std::pair<Kind, Value>, Id> lookup_;
  std::map<Id, std::vector<Link>> adj_;
  std::vector<Id> edges_;
};

}  // namespace cbaco::policy
