#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "cbaco/portgraph/rule.hpp"

namespace testsupport {

using namespace cbaco::pg;

inline Value pick(std::mt19937& rng, std::initializer_list<Value> vs) {
  std::vector<Value> v(vs);
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

inline int uniform(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Small labelled host graph: node labels from {A,B}, ports named x/y,
// edges carry a 0/1 weight. Self-loops and parallel edges allowed.
inline PortGraph random_host(std::mt19937& rng, int max_nodes = 6) {
  PortGraph g;
  int n = uniform(rng, 1, max_nodes);
  std::vector<Id> ports;
  for (int i = 0; i < n; ++i) {
    Id id = g.add_node({{"Name", pick(rng, {"A", "B"})}});
    int k = uniform(rng, 1, 2);
    for (int j = 0; j < k; ++j)
      ports.push_back(g.add_port(id, {{"Name", j == 0 ? "x" : "y"}}));
  }
  int m = uniform(rng, 0, n + 2);
  for (int i = 0; i < m; ++i) {
    Id a = ports[uniform(rng, 0, ports.size() - 1)];
    Id b = ports[uniform(rng, 0, ports.size() - 1)];
    g.add_edge(a, b, {{"Name", "e"}, {"w", pick(rng, {0, 1})}});
  }
  return g;
}

// Rule whose lhs has 1-2 nodes (labels possibly variables) and whose rhs is
// a fresh node per lhs node; a random subset of lhs ports is bridged.
inline RewriteRule random_rule(std::mt19937& rng) {
  RewriteRule r;
  r.name = "R";
  int n = uniform(rng, 1, 2);
  std::vector<Id> lports;
  for (int i = 0; i < n; ++i) {
    Value lbl = pick(rng, {"A", "B", Value::var("N")});
    Id id = r.lhs.add_node({{"Name", lbl}});
    int k = uniform(rng, 1, 2);
    for (int j = 0; j < k; ++j)
      lports.push_back(r.lhs.add_port(id, {{"Name", j == 0 ? "x" : "y"}}));
  }
  int m = uniform(rng, 0, 2);
  for (int i = 0; i < m; ++i) {
    Id a = lports[uniform(rng, 0, lports.size() - 1)];
    Id b = lports[uniform(rng, 0, lports.size() - 1)];
    r.lhs.add_edge(a, b, {{"Name", "e"}, {"w", pick(rng, {0, 1, Value::var("W")})}});
  }
  Id rn = r.rhs.add_node({{"Name", "Z"}});
  Id rp = r.rhs.add_port(rn, {{"Name", "x"}});
  for (Id lp : lports)
    if (uniform(rng, 0, 3) != 0) r.arrow.push_back({ArrowKind::bridge, {lp}, {rp}});
  return r;
}

// Exhaustive morphism enumeration, independent of the library matcher:
// every injective node map, every injective port map within images, every
// injective edge map; labels checked afterwards with one shared binding set.
class BruteForceMatcher {
 public:
  using Key = std::tuple<std::map<Id, Id>, std::map<Id, Id>, std::map<Id, Id>>;

  BruteForceMatcher(const PortGraph& host, const RewriteRule& rule)
      : host_(host), rule_(rule) {}

  std::set<Key> run() {
    std::vector<Id> lnodes, hnodes;
    for (const auto& [id, _] : rule_.lhs.nodes()) lnodes.push_back(id);
    for (const auto& [id, _] : host_.nodes()) hnodes.push_back(id);
    std::set<Key> out;
    for (const auto& nm : injections(lnodes, hnodes)) {
      bool sizes_ok = true;
      for (const auto& [l, h] : nm)
        if (rule_.lhs.node(l).ports.size() != host_.node(h).ports.size())
          sizes_ok = false;
      if (!sizes_ok) continue;
      for (const auto& pm : port_maps(nm)) {
        std::vector<Id> ledges, hedges;
        for (const auto& [id, _] : rule_.lhs.edges()) ledges.push_back(id);
        for (const auto& [id, _] : host_.edges()) hedges.push_back(id);
        for (const auto& em : injections(ledges, hedges))
          if (accept(nm, pm, em)) out.insert({nm, pm, em});
      }
    }
    return out;
  }

 private:
  static void extend(const std::vector<Id>& from, const std::vector<Id>& to,
                     std::size_t i, std::map<Id, Id>& cur, std::set<Id>& used,
                     std::vector<std::map<Id, Id>>& out) {
    if (i == from.size()) {
      out.push_back(cur);
      return;
    }
    for (Id t : to) {
      if (used.count(t)) continue;
      used.insert(t);
      cur[from[i]] = t;
      extend(from, to, i + 1, cur, used, out);
      cur.erase(from[i]);
      used.erase(t);
    }
  }

  static std::vector<std::map<Id, Id>> injections(const std::vector<Id>& from,
                                                  const std::vector<Id>& to) {
    std::vector<std::map<Id, Id>> out;
    std::map<Id, Id> cur;
    std::set<Id> used;
    extend(from, to, 0, cur, used, out);
    return out;
  }

  std::vector<std::map<Id, Id>> port_maps(const std::map<Id, Id>& nm) const {
    std::vector<std::map<Id, Id>> acc{{}};
    for (const auto& [l, h] : nm) {
      std::vector<std::map<Id, Id>> next;
      for (const auto& part : injections(rule_.lhs.node(l).ports, host_.node(h).ports))
        for (const auto& base : acc) {
          auto merged = base;
          merged.insert(part.begin(), part.end());
          next.push_back(merged);
        }
      acc = std::move(next);
    }
    return acc;
  }

  // Flat records only: every pattern key must exist in the host; a variable
  // takes the first value it meets and must meet the same value afterwards.
  static bool labels_fit(const Record& pattern, const Record& host,
                         std::map<std::string, Value>& b) {
    for (const auto& [k, v] : pattern) {
      auto it = host.find(k);
      if (it == host.end()) return false;
      if (v.is_var()) {
        auto [pos, fresh] = b.emplace(v.as_var().name, it->second);
        if (!fresh && !(pos->second == it->second)) return false;
      } else if (!(v == it->second)) {
        return false;
      }
    }
    return true;
  }

  bool accept(const std::map<Id, Id>& nm, const std::map<Id, Id>& pm,
              const std::map<Id, Id>& em) const {
    std::map<std::string, Value> b;
    for (const auto& [l, h] : nm)
      if (!labels_fit(rule_.lhs.node(l).attrs, host_.node(h).attrs, b)) return false;
    for (const auto& [l, h] : pm)
      if (!labels_fit(rule_.lhs.port(l).attrs, host_.port(h).attrs, b)) return false;
    for (const auto& [l, h] : em) {
      const auto& le = rule_.lhs.edge(l);
      const auto& he = host_.edge(h);
      std::multiset<Id> want{pm.at(le.a), pm.at(le.b)};
      std::multiset<Id> got{he.a, he.b};
      if (want != got) return false;
      if (!labels_fit(le.attrs, he.attrs, b)) return false;
    }
    std::set<Id> arrow = rule_.arrow_lhs_ports();
    std::set<Id> inside;
    for (const auto& [_, h] : em) inside.insert(h);
    for (const auto& [l, h] : pm) {
      if (arrow.count(l)) continue;
      for (const auto& [eid, e] : host_.edges())
        if ((e.a == h || e.b == h) && !inside.count(eid)) return false;
    }
    return true;
  }

  const PortGraph& host_;
  const RewriteRule& rule_;
};

}  // namespace testsupport
