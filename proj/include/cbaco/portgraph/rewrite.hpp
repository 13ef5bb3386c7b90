#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cbaco/portgraph/rule.hpp"

namespace cbaco::pg {

// Result of one rewriting step plus the bookkeeping located rewriting needs.
struct RewriteTrace {
  PortGraph graph;
  std::map<Id, Id> rhs_images;   // rhs element -> new host element
  std::map<Id, Id> edge_copies;  // extra copy of an external edge -> original
  IdSet erased_edges;            // external edges dropped by blackhole/wire
};

namespace detail {

inline Record instantiate(const Record& r, const Bindings& b,
                          const std::string& rule) {
  Record out;
  for (const auto& [k, v] : r) {
    auto s = substitute(v, b);
    if (!s)
      throw InvalidRule("rule " + rule + ": unbound variable in rhs attribute " +
                        k);
    out.emplace(k, std::move(*s));
  }
  return out;
}

inline void check_fresh(const PortGraph& host, const RewriteRule& rule,
                        const Morphism& f) {
  auto stale = [&](const std::string& what) {
    throw InvalidMorphism("stale morphism for rule " + rule.name + ": " + what);
  };
  if (f.nodes.size() != rule.lhs.nodes().size() ||
      f.ports.size() != rule.lhs.ports().size() ||
      f.edges.size() != rule.lhs.edges().size())
    stale("morphism does not cover the lhs");
  for (const auto& [ln, hn] : f.nodes)
    if (!rule.lhs.has_node(ln) || !host.has_node(hn))
      stale("node " + std::to_string(hn) + " missing");
  for (const auto& [lp, hp] : f.ports) {
    if (!rule.lhs.has_port(lp) || !host.has_port(hp))
      stale("port " + std::to_string(hp) + " missing");
    auto it = f.nodes.find(rule.lhs.port(lp).node);
    if (it == f.nodes.end() || host.port(hp).node != it->second)
      stale("port " + std::to_string(hp) + " is not attached to its node image");
  }
  for (const auto& [le, he] : f.edges) {
    if (!rule.lhs.has_edge(le) || !host.has_edge(he))
      stale("edge " + std::to_string(he) + " missing");
    const auto& l = rule.lhs.edge(le);
    const auto& h = host.edge(he);
    Id a = f.ports.at(l.a), b = f.ports.at(l.b);
    if (!((h.a == a && h.b == b) || (h.a == b && h.b == a)))
      stale("edge " + std::to_string(he) + " does not connect its port images");
  }
  for (const auto& [ln, hn] : f.nodes)
    if (host.node(hn).ports.size() != rule.lhs.node(ln).ports.size())
      stale("node " + std::to_string(hn) + " interface changed");
}

}  // namespace detail

// One rewriting step: build f(R), rewire external edges through the arrow
// node, delete f(L). External edges keep their id when re-attached; extra
// copies for multi-target bridges get fresh ids.
inline RewriteTrace apply_rule_traced(const PortGraph& host,
                                      const RewriteRule& rule,
                                      const Morphism& f) {
  if (auto problems = rule.check(); !problems.empty())
    throw InvalidRule("rule " + rule.name + ": " + problems.front());
  detail::check_fresh(host, rule, f);

  RewriteTrace t{host, {}, {}, {}};
  PortGraph& g = t.graph;

  // build
  for (const auto& [rn, node] : rule.rhs.nodes()) {
    Id hn = g.add_node(detail::instantiate(node.attrs, f.bindings, rule.name));
    t.rhs_images[rn] = hn;
    for (Id rp : node.ports)
      t.rhs_images[rp] = g.add_port(
          hn, detail::instantiate(rule.rhs.port(rp).attrs, f.bindings, rule.name));
  }
  for (const auto& [re, edge] : rule.rhs.edges())
    t.rhs_images[re] =
        g.add_edge(t.rhs_images.at(edge.a), t.rhs_images.at(edge.b),
                   detail::instantiate(edge.attrs, f.bindings, rule.name));

  // rewire
  std::map<Id, const ArrowPort*> role;  // host port image -> arrow port
  for (const auto& ap : rule.arrow)
    for (Id lp : ap.lhs_ports) role[f.ports.at(lp)] = &ap;

  IdSet lhs_edge_images;
  for (const auto& [_, he] : f.edges) lhs_edge_images.insert(he);
  IdSet lhs_port_images;
  for (const auto& [_, hp] : f.ports) lhs_port_images.insert(hp);

  // Where an endpoint of an external edge ends up after rewriting.
  auto targets = [&](Id host_port) -> std::vector<Id> {
    if (!lhs_port_images.count(host_port)) return {host_port};
    auto it = role.find(host_port);
    if (it == role.end() || it->second->kind != ArrowKind::bridge) return {};
    std::vector<Id> out;
    for (Id rp : it->second->rhs_ports) out.push_back(t.rhs_images.at(rp));
    return out;
  };
  auto is_wired = [&](Id host_port) {
    auto it = role.find(host_port);
    return it != role.end() && it->second->kind == ArrowKind::wire;
  };

  std::vector<Id> external;
  for (const auto& [he, e] : host.edges()) {
    if (lhs_edge_images.count(he)) continue;
    if (lhs_port_images.count(e.a) || lhs_port_images.count(e.b))
      external.push_back(he);
  }

  for (Id he : external) {
    const auto& e = host.edge(he);
    if (is_wired(e.a) || is_wired(e.b)) continue;  // consumed by wiring below
    auto ta = targets(e.a);
    auto tb = targets(e.b);
    std::vector<std::pair<Id, Id>> pairs;
    if (e.a == e.b) {
      for (std::size_t i = 0; i < ta.size(); ++i)
        for (std::size_t j = i; j < ta.size(); ++j) pairs.emplace_back(ta[i], ta[j]);
    } else {
      for (Id x : ta)
        for (Id y : tb) pairs.emplace_back(x, y);
    }
    Record attrs = e.attrs;
    g.remove_edge(he);
    if (pairs.empty()) {
      t.erased_edges.insert(he);
      continue;
    }
    g.add_edge_with_id(he, pairs[0].first, pairs[0].second, attrs);
    for (std::size_t i = 1; i < pairs.size(); ++i)
      t.edge_copies[g.add_edge(pairs[i].first, pairs[i].second, attrs)] = he;
  }

  for (const auto& ap : rule.arrow) {
    if (ap.kind != ArrowKind::wire) continue;
    Id p1 = f.ports.at(ap.lhs_ports[0]);
    Id p2 = f.ports.at(ap.lhs_ports[1]);
    auto ends = [&](Id p) {
      std::vector<std::pair<Id, Id>> out;  // (external edge, far port)
      for (Id he : host.port(p).edges) {
        if (lhs_edge_images.count(he)) continue;
        const auto& e = host.edge(he);
        if (e.a == e.b) continue;
        out.emplace_back(he, e.other(p));
      }
      return out;
    };
    for (const auto& [e1, x] : ends(p1))
      for (const auto& [e2, y] : ends(p2)) {
        (void)e2;
        for (Id xt : targets(x))
          for (Id yt : targets(y))
            t.edge_copies[g.add_edge(xt, yt, host.edge(e1).attrs)] = e1;
      }
  }

  // delete
  for (const auto& [_, he] : f.edges) g.remove_edge(he);
  for (const auto& [_, hn] : f.nodes) {
    for (Id hp : g.node(hn).ports)
      for (Id he : g.port(hp).edges)
        if (host.has_edge(he)) t.erased_edges.insert(he);
    g.remove_node(hn);
  }
  return t;
}

inline PortGraph apply_rule(const PortGraph& host, const RewriteRule& rule,
                            const Morphism& f) {
  return apply_rule_traced(host, rule, f).graph;
}

}  // namespace cbaco::pg
