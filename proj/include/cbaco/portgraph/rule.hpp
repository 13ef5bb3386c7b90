#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cbaco/portgraph/graph.hpp"

namespace cbaco::pg {

enum class ArrowKind { bridge, blackhole, wire };

inline const char* to_string(ArrowKind k) {
  switch (k) {
    case ArrowKind::bridge:
      return "bridge";
    case ArrowKind::blackhole:
      return "blackhole";
    case ArrowKind::wire:
      return "wire";
  }
  return "?";
}

// One port of the arrow node together with its edges into lhs and rhs.
struct ArrowPort {
  ArrowKind kind = ArrowKind::bridge;
  std::vector<Id> lhs_ports;
  std::vector<Id> rhs_ports;

  bool operator==(const ArrowPort&) const = default;
};

// lhs => rhs joined by an arrow node. lhs and rhs have their own id spaces.
struct RewriteRule {
  std::string name;
  PortGraph lhs;
  PortGraph rhs;
  std::vector<ArrowPort> arrow;

  // Structural problems with the arrow node; empty when the rule is sound.
  std::vector<std::string> check() const {
    std::vector<std::string> out;
    std::size_t blackholes = 0;
    std::set<Id> seen;
    for (const auto& ap : arrow) {
      for (Id p : ap.lhs_ports)
        if (!lhs.has_port(p))
          out.push_back("arrow port refers to unknown lhs port " +
                        std::to_string(p));
      for (Id p : ap.rhs_ports)
        if (!rhs.has_port(p))
          out.push_back("arrow port refers to unknown rhs port " +
                        std::to_string(p));
      switch (ap.kind) {
        case ArrowKind::bridge:
          if (ap.lhs_ports.size() != 1 || ap.rhs_ports.empty())
            out.push_back("bridge port needs one lhs edge and >= 1 rhs edges");
          break;
        case ArrowKind::blackhole:
          ++blackholes;
          if (!ap.rhs_ports.empty() || ap.lhs_ports.empty())
            out.push_back("blackhole port may only connect to lhs ports");
          break;
        case ArrowKind::wire:
          if (ap.lhs_ports.size() != 2 || !ap.rhs_ports.empty())
            out.push_back("wire port needs exactly two lhs edges");
          else if (ap.lhs_ports[0] == ap.lhs_ports[1])
            out.push_back("wire port connects the same lhs port twice");
          break;
      }
      for (Id p : ap.lhs_ports)
        if (!seen.insert(p).second)
          out.push_back("lhs port " + std::to_string(p) +
                        " is connected to the arrow node more than once");
    }
    if (blackholes > 1) out.push_back("more than one blackhole port");
    std::set<std::string> lhs_vars;
    auto scan = [](const PortGraph& g, std::set<std::string>& vars) {
      for (Id id : g.elements())
        for (const auto& [k, v] : g.attrs(id)) collect_vars(v, vars);
    };
    scan(lhs, lhs_vars);
    std::set<std::string> rhs_vars;
    scan(rhs, rhs_vars);
    for (const auto& v : rhs_vars)
      if (!lhs_vars.count(v))
        out.push_back("rhs variable ?" + v + " is not bound by the lhs");
    return out;
  }

  std::set<Id> arrow_lhs_ports() const {
    std::set<Id> out;
    for (const auto& ap : arrow) out.insert(ap.lhs_ports.begin(), ap.lhs_ports.end());
    return out;
  }
};

// An injective embedding of a rule's lhs into a host graph.
struct Morphism {
  std::map<Id, Id> nodes;
  std::map<Id, Id> ports;
  std::map<Id, Id> edges;
  Bindings bindings;

  bool operator==(const Morphism&) const = default;

  // f(L) as a set of host element ids.
  IdSet image() const {
    IdSet out;
    for (const auto& [_, h] : nodes) out.insert(h);
    for (const auto& [_, h] : ports) out.insert(h);
    for (const auto& [_, h] : edges) out.insert(h);
    return out;
  }

  // Image of a set of lhs element ids.
  IdSet image_of(const IdSet& lhs_elements) const {
    IdSet out;
    for (Id x : lhs_elements) {
      if (auto it = nodes.find(x); it != nodes.end()) out.insert(it->second);
      if (auto it = ports.find(x); it != ports.end()) out.insert(it->second);
      if (auto it = edges.find(x); it != edges.end()) out.insert(it->second);
    }
    return out;
  }

  std::vector<Id> sorted_node_images() const {
    std::vector<Id> out;
    for (const auto& [_, h] : nodes) out.push_back(h);
    std::sort(out.begin(), out.end());
    return out;
  }

  // Stable textual digest (FNV-1a over the mapping), used in derivation trees.
  std::string digest() const {
    std::string s;
    for (const auto* m : {&nodes, &ports, &edges}) {
      for (const auto& [l, h] : *m) {
        s += std::to_string(l);
        s += '>';
        s += std::to_string(h);
        s += ';';
      }
      s += '|';
    }
    for (const auto& [k, v] : bindings) s += k + "=" + v.repr() + ";";
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : s) {
      hash ^= c;
      hash *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
      out[i] = hex[hash & 0xf];
      hash >>= 4;
    }
    return out;
  }
};

// Canonical order: sorted host node ids first, then the maps in lhs order.
inline bool canonical_less(const Morphism& a, const Morphism& b) {
  auto an = a.sorted_node_images();
  auto bn = b.sorted_node_images();
  if (an != bn) return an < bn;
  auto flat = [](const std::map<Id, Id>& m) {
    std::vector<Id> v;
    for (const auto& [_, h] : m) v.push_back(h);
    return v;
  };
  if (flat(a.nodes) != flat(b.nodes)) return flat(a.nodes) < flat(b.nodes);
  if (flat(a.ports) != flat(b.ports)) return flat(a.ports) < flat(b.ports);
  return flat(a.edges) < flat(b.edges);
}

}  // namespace cbaco::pg
