#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cbaco/error.hpp"
#include "cbaco/portgraph/value.hpp"

namespace cbaco::pg {

// Nodes, ports and edges share one id space so that subgraph references
// (position, banned) can be plain id sets.
using Id = std::uint64_t;
using IdSet = std::set<Id>;

enum class ElementKind { node, port, edge };

struct NodeData {
  Record attrs;
  std::vector<Id> ports;  // Interface, in insertion order

  bool operator==(const NodeData&) const = default;
};

struct PortData {
  Id node = 0;  // Attach
  Record attrs;
  std::vector<Id> edges;  // incident edges, each listed once

  bool operator==(const PortData&) const = default;
};

struct EdgeData {
  Id a = 0;  // Connect = {a, b}; a == b is a self-loop on one port
  Id b = 0;
  Record attrs;

  Id other(Id p) const { return p == a ? b : a; }

  bool operator==(const EdgeData&) const = default;
};

// An attributed port graph. Structural attributes (Interface, Attach, Arity,
// Connect) are held as structure and synthesised by label().
class PortGraph {
 public:
  Id add_node(Record attrs) {
    Id id = next_id_++;
    nodes_.emplace(id, NodeData{std::move(attrs), {}});
    return id;
  }

  Id add_port(Id node, Record attrs) {
    auto it = nodes_.find(node);
    if (it == nodes_.end())
      throw Error("add_port: unknown node " + std::to_string(node));
    Id id = next_id_++;
    ports_.emplace(id, PortData{node, std::move(attrs), {}});
    it->second.ports.push_back(id);
    return id;
  }

  Id add_edge(Id port_a, Id port_b, Record attrs) {
    return add_edge_with_id(next_id_, port_a, port_b, std::move(attrs));
  }

  // Used by rewiring, which re-attaches an existing edge under its old id.
  Id add_edge_with_id(Id id, Id port_a, Id port_b, Record attrs) {
    if (contains(id)) throw Error("duplicate element id " + std::to_string(id));
    auto pa = ports_.find(port_a);
    auto pb = ports_.find(port_b);
    if (pa == ports_.end() || pb == ports_.end())
      throw Error("add_edge: unknown port");
    edges_.emplace(id, EdgeData{port_a, port_b, std::move(attrs)});
    pa->second.edges.push_back(id);
    if (port_a != port_b) pb->second.edges.push_back(id);
    next_id_ = std::max(next_id_, id + 1);
    return id;
  }

  void remove_edge(Id id) {
    auto it = edges_.find(id);
    if (it == edges_.end()) return;
    for (Id p : {it->second.a, it->second.b}) {
      auto& list = ports_.at(p).edges;
      list.erase(std::remove(list.begin(), list.end(), id), list.end());
    }
    edges_.erase(it);
  }

  // Removes the node together with its ports and every edge touching them.
  void remove_node(Id id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) return;
    for (Id p : it->second.ports) {
      auto edges = ports_.at(p).edges;
      for (Id e : edges) remove_edge(e);
      ports_.erase(p);
    }
    nodes_.erase(it);
  }

  void set_attr(Id id, const std::string& key, Value v) {
    mutable_attrs(id)[key] = std::move(v);
  }

  Record& mutable_attrs(Id id) {
    if (auto n = nodes_.find(id); n != nodes_.end()) return n->second.attrs;
    if (auto p = ports_.find(id); p != ports_.end()) return p->second.attrs;
    if (auto e = edges_.find(id); e != edges_.end()) return e->second.attrs;
    throw Error("unknown element " + std::to_string(id));
  }

  const Record& attrs(Id id) const {
    if (auto n = nodes_.find(id); n != nodes_.end()) return n->second.attrs;
    if (auto p = ports_.find(id); p != ports_.end()) return p->second.attrs;
    if (auto e = edges_.find(id); e != edges_.end()) return e->second.attrs;
    throw Error("unknown element " + std::to_string(id));
  }

  const std::map<Id, NodeData>& nodes() const { return nodes_; }
  const std::map<Id, PortData>& ports() const { return ports_; }
  const std::map<Id, EdgeData>& edges() const { return edges_; }

  const NodeData& node(Id id) const { return nodes_.at(id); }
  const PortData& port(Id id) const { return ports_.at(id); }
  const EdgeData& edge(Id id) const { return edges_.at(id); }

  bool has_node(Id id) const { return nodes_.count(id) != 0; }
  bool has_port(Id id) const { return ports_.count(id) != 0; }
  bool has_edge(Id id) const { return edges_.count(id) != 0; }
  bool contains(Id id) const {
    return has_node(id) || has_port(id) || has_edge(id);
  }

  std::optional<ElementKind> kind_of(Id id) const {
    if (has_node(id)) return ElementKind::node;
    if (has_port(id)) return ElementKind::port;
    if (has_edge(id)) return ElementKind::edge;
    return std::nullopt;
  }

  std::size_t arity(Id port) const { return ports_.at(port).edges.size(); }

  // Node owning the port at the given end of an edge.
  Id edge_node_a(Id e) const { return ports_.at(edges_.at(e).a).node; }
  Id edge_node_b(Id e) const { return ports_.at(edges_.at(e).b).node; }

  std::optional<Id> find_port(Id node, const std::string& name) const {
    for (Id p : nodes_.at(node).ports) {
      auto it = ports_.at(p).attrs.find("Name");
      if (it != ports_.at(p).attrs.end() && it->second.is_string() &&
          it->second.as_string() == name)
        return p;
    }
    return std::nullopt;
  }

  IdSet elements() const {
    IdSet out;
    for (const auto& [id, _] : nodes_) out.insert(id);
    for (const auto& [id, _] : ports_) out.insert(id);
    for (const auto& [id, _] : edges_) out.insert(id);
    return out;
  }

  bool empty() const { return nodes_.empty(); }
  Id next_id() const { return next_id_; }

  // The full record of an element, including the structural attributes.
  Record label(Id id) const {
    Record r = attrs(id);
    if (auto n = nodes_.find(id); n != nodes_.end()) {
      Value::Tuple iface;
      for (Id p : n->second.ports) iface.emplace_back(static_cast<std::int64_t>(p));
      r["Interface"] = Value(std::move(iface));
    } else if (auto p = ports_.find(id); p != ports_.end()) {
      r["Attach"] = Value(static_cast<std::int64_t>(p->second.node));
      r["Arity"] = Value(static_cast<std::int64_t>(p->second.edges.size()));
    } else {
      const auto& e = edges_.at(id);
      r["Connect"] = Value::tuple({Value(static_cast<std::int64_t>(e.a)),
                                   Value(static_cast<std::int64_t>(e.b))});
    }
    return r;
  }

  // Returns one message per broken structural invariant; empty when sound.
  std::vector<std::string> check_invariants() const {
    std::vector<std::string> out;
    for (const auto& [id, n] : nodes_) {
      std::set<Id> iface(n.ports.begin(), n.ports.end());
      std::set<Id> attached;
      for (const auto& [pid, p] : ports_)
        if (p.node == id) attached.insert(pid);
      if (iface != attached || iface.size() != n.ports.size())
        out.push_back("node " + std::to_string(id) +
                      ": Interface differs from attached ports");
    }
    for (const auto& [id, p] : ports_) {
      if (!nodes_.count(p.node))
        out.push_back("port " + std::to_string(id) + ": dangling Attach");
      std::size_t count = 0;
      for (const auto& [eid, e] : edges_)
        if (e.a == id || e.b == id) ++count;
      std::set<Id> listed(p.edges.begin(), p.edges.end());
      if (count != p.edges.size() || listed.size() != p.edges.size())
        out.push_back("port " + std::to_string(id) + ": Arity mismatch");
      for (Id e : p.edges)
        if (!edges_.count(e))
          out.push_back("port " + std::to_string(id) + ": unknown edge " +
                        std::to_string(e));
    }
    for (const auto& [id, e] : edges_) {
      if (!ports_.count(e.a) || !ports_.count(e.b))
        out.push_back("edge " + std::to_string(id) + ": dangling Connect");
    }
    for (const auto& [id, n] : nodes_)
      if (!n.attrs.count("Name"))
        out.push_back("node " + std::to_string(id) + ": missing Name");
    for (const auto& [id, p] : ports_)
      if (!p.attrs.count("Name"))
        out.push_back("port " + std::to_string(id) + ": missing Name");
    for (const auto& [id, e] : edges_)
      if (!e.attrs.count("Name"))
        out.push_back("edge " + std::to_string(id) + ": missing Name");
    return out;
  }

  friend bool operator==(const PortGraph&, const PortGraph&) = default;

 private:
  std::map<Id, NodeData> nodes_;
  std::map<Id, PortData> ports_;
  std::map<Id, EdgeData> edges_;
  Id next_id_ = 1;
};

// Attribute lookup that tolerates absence.
inline const Value* find_attr(const Record& r, const std::string& key) {
  auto it = r.find(key);
  return it == r.end() ? nullptr : &it->second;
}

inline std::string string_attr(const Record& r, const std::string& key) {
  const Value* v = find_attr(r, key);
  return v && v->is_string() ? v->as_string() : std::string();
}

}  // namespace cbaco::pg
