#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

#include "cbaco/portgraph/rule.hpp"

namespace cbaco::pg {

namespace detail {

// Backtracking enumeration: lhs nodes in id order, then the ports of each
// node, then lhs edges. Host ports of a mapped node must be covered exactly
// (same interface size) so that deleting f(L) removes whole nodes.
class Matcher {
 public:
  Matcher(const PortGraph& host, const RewriteRule& rule)
      : host_(host), rule_(rule), arrow_ports_(rule.arrow_lhs_ports()) {
    for (const auto& [id, _] : rule.lhs.nodes()) lhs_nodes_.push_back(id);
    for (const auto& [id, _] : rule.lhs.edges()) lhs_edges_.push_back(id);
  }

  std::vector<Morphism> run() {
    for (Id id : rule_.lhs.elements())
      for (const auto& [k, _] : rule_.lhs.attrs(id))
        if (is_attribute_variable(k))
          throw InvalidRule("rule " + rule_.name +
                            ": attribute variables are not supported (" + k +
                            ")");
    Morphism m;
    match_node(0, m);
    std::sort(results_.begin(), results_.end(), canonical_less);
    return std::move(results_);
  }

 private:
  void match_node(std::size_t i, Morphism& m) {
    if (i == lhs_nodes_.size()) {
      match_edge(0, m);
      return;
    }
    Id ln = lhs_nodes_[i];
    const auto& lnode = rule_.lhs.node(ln);
    for (const auto& [hn, hnode] : host_.nodes()) {
      if (used_.count(hn)) continue;
      if (hnode.ports.size() != lnode.ports.size()) continue;
      Bindings saved = m.bindings;
      if (!unify(lnode.attrs, hnode.attrs, m.bindings)) {
        m.bindings = std::move(saved);
        continue;
      }
      used_.insert(hn);
      m.nodes[ln] = hn;
      match_port(i, 0, m);
      m.nodes.erase(ln);
      used_.erase(hn);
      m.bindings = std::move(saved);
    }
  }

  void match_port(std::size_t node_index, std::size_t j, Morphism& m) {
    Id ln = lhs_nodes_[node_index];
    const auto& lports = rule_.lhs.node(ln).ports;
    if (j == lports.size()) {
      match_node(node_index + 1, m);
      return;
    }
    Id lp = lports[j];
    Id hn = m.nodes.at(ln);
    for (Id hp : host_.node(hn).ports) {
      if (used_.count(hp)) continue;
      Bindings saved = m.bindings;
      if (!unify(rule_.lhs.port(lp).attrs, host_.port(hp).attrs, m.bindings)) {
        m.bindings = std::move(saved);
        continue;
      }
      used_.insert(hp);
      m.ports[lp] = hp;
      match_port(node_index, j + 1, m);
      m.ports.erase(lp);
      used_.erase(hp);
      m.bindings = std::move(saved);
    }
  }

  void match_edge(std::size_t k, Morphism& m) {
    if (k == lhs_edges_.size()) {
      if (dangling_free(m)) results_.push_back(m);
      return;
    }
    Id le = lhs_edges_[k];
    const auto& ledge = rule_.lhs.edge(le);
    Id ha = m.ports.at(ledge.a);
    Id hb = m.ports.at(ledge.b);
    for (Id he : host_.port(ha).edges) {
      if (used_.count(he)) continue;
      const auto& hedge = host_.edge(he);
      bool fits = (hedge.a == ha && hedge.b == hb) ||
                  (hedge.a == hb && hedge.b == ha);
      if (!fits) continue;
      Bindings saved = m.bindings;
      if (!unify(ledge.attrs, hedge.attrs, m.bindings)) {
        m.bindings = std::move(saved);
        continue;
      }
      used_.insert(he);
      m.edges[le] = he;
      match_edge(k + 1, m);
      m.edges.erase(le);
      used_.erase(he);
      m.bindings = std::move(saved);
    }
  }

  // Ports outside the arrow's reach may only carry edges inside f(L).
  bool dangling_free(const Morphism& m) const {
    std::set<Id> inside;
    for (const auto& [_, he] : m.edges) inside.insert(he);
    for (const auto& [lp, hp] : m.ports) {
      if (arrow_ports_.count(lp)) continue;
      for (Id he : host_.port(hp).edges)
        if (!inside.count(he)) return false;
    }
    return true;
  }

  const PortGraph& host_;
  const RewriteRule& rule_;
  std::set<Id> arrow_ports_;
  std::vector<Id> lhs_nodes_;
  std::vector<Id> lhs_edges_;
  std::set<Id> used_;
  std::vector<Morphism> results_;
};

}  // namespace detail

// Every morphism of the rule's lhs into host satisfying the dangling
// condition, in canonical order.
inline std::vector<Morphism> match_rule(const PortGraph& host,
                                        const RewriteRule& rule) {
  return detail::Matcher(host, rule).run();
}

}  // namespace cbaco::pg
