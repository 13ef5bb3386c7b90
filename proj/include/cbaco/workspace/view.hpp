#pragma once

#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cbaco/policy/policy_graph.hpp"

namespace cbaco::ws {

// Which elements a view leaves out. Auxiliary edges are always hidden, and an
// edge is hidden whenever one of its endpoints is.
struct ViewFilter {
  std::set<policy::Kind> hidden_kinds;
  std::set<std::string> hidden_edge_types;
  std::set<pg::Id> hidden;  // explicit node or edge ids
  std::function<bool(const pg::Record&)> hide_if;  // over node and edge records

  // Comma-separated tokens: a node kind (`E`), an edge type (`EE`), or
  // `key=value` to hide elements whose string attribute `key` equals `value`.
  static ViewFilter parse(std::string_view spec) {
    ViewFilter f;
    std::vector<std::pair<std::string, std::string>> attr_tests;
    std::size_t start = 0;
    while (start <= spec.size()) {
      std::size_t end = spec.find(',', start);
      if (end == std::string_view::npos) end = spec.size();
      std::string tok(spec.substr(start, end - start));
      start = end + 1;
      tok.erase(0, tok.find_first_not_of(' '));
      tok.erase(tok.find_last_not_of(' ') + 1);
      if (tok.empty()) continue;
      if (auto eq = tok.find('='); eq != std::string::npos) {
        attr_tests.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
      } else if (auto k = policy::kind_from_string(tok)) {
        f.hidden_kinds.insert(*k);
      } else if (tok.size() >= 2) {
        f.hidden_edge_types.insert(tok);
      } else {
        throw ParseError("unknown view token: " + tok);
      }
    }
    if (!attr_tests.empty())
      f.hide_if = [attr_tests](const pg::Record& r) {
        for (const auto& [k, v] : attr_tests)
          if (pg::string_attr(r, k) == v) return true;
        return false;
      };
    return f;
  }
};

struct View {
  std::vector<pg::Id> nodes;
  std::vector<pg::Id> edges;
};

inline View apply_view(const policy::PolicyGraph& g, const ViewFilter& f = {}) {
  View v;
  std::set<pg::Id> shown;
  for (const auto& [id, n] : g.nodes()) {
    auto k = policy::node_kind(g, id);
    if (k && f.hidden_kinds.count(*k)) continue;
    if (f.hidden.count(id) || (f.hide_if && f.hide_if(n.attrs))) continue;
    shown.insert(id);
    v.nodes.push_back(id);
  }
  for (const auto& [id, e] : g.edges()) {
    if (policy::is_aux(g, id) || f.hidden.count(id)) continue;
    if (f.hidden_edge_types.count(policy::edge_type_of(g, id))) continue;
    if (f.hide_if && f.hide_if(e.attrs)) continue;
    if (!shown.count(g.port(e.a).node) || !shown.count(g.port(e.b).node)) continue;
    v.edges.push_back(id);
  }
  return v;
}

}  // namespace cbaco::ws
