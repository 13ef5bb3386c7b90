#pragma once

#include <algorithm>
#include <cctype>
#include <cstring>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cbaco/error.hpp"
#include "cbaco/policy/policy_graph.hpp"

namespace cbaco::policy {

// n0 e1 n1 ... ed nd
struct Path {
  std::vector<Id> nodes;
  std::vector<Id> edges;

  std::size_t length() const { return edges.size(); }
  bool operator==(const Path&) const = default;
  bool operator<(const Path& o) const {
    return std::tie(nodes, edges) < std::tie(o.nodes, o.edges);
  }
};

// One edge of a path in the type alphabet: the endpoint kinds in traversal
// order, an arrow for directed edges, ^A/^B for CPr edges.
inline std::string step_token(const PolicyIndex& idx, Id e, Id from, Id to) {
  std::string base = std::string(to_string(*idx.kind(from))) + to_string(*idx.kind(to));
  std::string out;
  if (is_directed_type(idx.type(e))) {
    bool fwd = idx.targets(e, to), back = idx.targets(e, from);
    out = fwd && back ? "<->" : fwd ? "->" : back ? "<-" : "";
  }
  out += base;
  if (idx.type(e) == "CPr") out += "^" + idx.text(e, "auth");
  return out;
}

// Type word of a node sequence. Between parallel edges the lowest id is
// reported.
inline std::vector<std::string> path_type(const PolicyGraph& g,
                                          const std::vector<Id>& nodes) {
  PolicyIndex idx(g);
  std::set<Id> seen;
  for (Id n : nodes) {
    if (!idx.kind(n)) throw NotAPath("node " + std::to_string(n) + " is not a typed node");
    if (!seen.insert(n).second)
      throw NotAPath("node " + std::to_string(n) + " repeats in the sequence");
  }
  std::vector<std::string> out;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    std::optional<Id> best;
    for (const auto& l : idx.links(nodes[i - 1]))
      if (l.other == nodes[i] && (!best || l.edge < *best)) best = l.edge;
    if (!best)
      throw NotAPath("nodes " + std::to_string(nodes[i - 1]) + " and " +
                     std::to_string(nodes[i]) + " are not adjacent");
    out.push_back(step_token(idx, *best, nodes[i - 1], nodes[i]));
  }
  return out;
}

inline std::string join_type(const std::vector<std::string>& word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) out += (i ? ", " : "") + word[i];
  return out;
}

struct PatternItem {
  std::string base;  // endpoint kinds, e.g. "PC", "CC", "CPr"
  int dir = 0;       // +1 forward arrow, -1 backward arrow
  std::string sub;   // "Pr" or "O" on CC: requires auth / obl
  std::string sup;   // "A" or "B" on CPr
  bool star = false;

  bool operator==(const PatternItem&) const = default;
};

using Pattern = std::vector<PatternItem>;

// Parses e.g. "PC, (->CC_Pr)*, CPr^A". Unicode arrows are accepted too.
inline Pattern parse_pattern(const std::string& text) {
  Pattern out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && text[i] == ' ') ++i;
  };
  auto starts = [&](const char* s) { return text.compare(i, std::strlen(s), s) == 0; };
  auto bad = [&](const std::string& why) {
    throw Error("bad path pattern '" + text + "': " + why);
  };
  skip();
  while (i < text.size()) {
    PatternItem item;
    bool paren = false;
    if (text[i] == '(') {
      paren = true;
      ++i;
    }
    if (starts("<->")) bad("double arrows cannot appear in patterns");
    if (starts("->")) { item.dir = 1; i += 2; }
    else if (starts("<-")) { item.dir = -1; i += 2; }
    else if (starts("→")) { item.dir = 1; i += 3; }
    else if (starts("←")) { item.dir = -1; i += 3; }
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i])))
      item.base += text[i++];
    if (item.base.empty()) bad("expected an edge type");
    if (i < text.size() && text[i] == '_') {
      ++i;
      while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i])))
        item.sub += text[i++];
    }
    if (i < text.size() && text[i] == '^') {
      ++i;
      while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i])))
        item.sup += text[i++];
    }
    if (paren) {
      if (i >= text.size() || text[i] != ')') bad("missing ')'");
      ++i;
    }
    if (i < text.size() && text[i] == '*') {
      item.star = true;
      ++i;
    } else if (paren) {
      bad("parenthesised item must be starred");
    }
    out.push_back(std::move(item));
    skip();
    if (i == text.size()) break;
    if (text[i] != ',') bad("expected ','");
    ++i;
    skip();
    if (i == text.size()) bad("trailing ','");
  }
  return out;
}

namespace detail {

inline bool item_accepts(const PolicyIndex& idx, const PatternItem& it, Id e, Id from,
                         Id to) {
  std::string base = std::string(to_string(*idx.kind(from))) + to_string(*idx.kind(to));
  if (base != it.base) return false;
  if (it.dir > 0 && !idx.targets(e, to)) return false;
  if (it.dir < 0 && !idx.targets(e, from)) return false;
  if (it.sub == "Pr" && !idx.flag(e, "auth")) return false;
  if (it.sub == "O" && !idx.flag(e, "obl")) return false;
  if (!it.sup.empty() && idx.text(e, "auth") != it.sup) return false;
  return true;
}

// Epsilon closure over starred items.
inline std::set<std::size_t> closure(const Pattern& p, std::set<std::size_t> s) {
  std::vector<std::size_t> work(s.begin(), s.end());
  while (!work.empty()) {
    std::size_t i = work.back();
    work.pop_back();
    if (i < p.size() && p[i].star && s.insert(i + 1).second) work.push_back(i + 1);
  }
  return s;
}

}  // namespace detail

// Every path from `from` whose type word matches the pattern. Nodes and
// edges are pairwise distinct; a directed edge must point forward (its
// target holds the next node) or, for inverse paths, backward.
// `visit` may return false to stop the search early.
inline void for_each_constrained_path(const PolicyIndex& idx, Id from,
                                      const Pattern& pattern, bool inverse,
                                      const std::function<bool(const Path&)>& visit) {
  if (!idx.kind(from)) return;
  Path cur{{from}, {}};
  std::set<Id> used_nodes{from}, used_edges;
  bool stop = false;
  std::function<void(const std::set<std::size_t>&)> dfs =
      [&](const std::set<std::size_t>& states) {
        if (stop) return;
        if (states.count(pattern.size()) && !visit(cur)) {
          stop = true;
          return;
        }
        Id here = cur.nodes.back();
        for (const auto& l : idx.links(here)) {
          if (used_nodes.count(l.other) || used_edges.count(l.edge)) continue;
          if (idx.has_target(l.edge) &&
              !(inverse ? idx.targets(l.edge, here) : idx.targets(l.edge, l.other)))
            continue;
          std::set<std::size_t> next;
          for (std::size_t s : states)
            if (s < pattern.size() &&
                detail::item_accepts(idx, pattern[s], l.edge, here, l.other))
              next.insert(pattern[s].star ? s : s + 1);
          if (next.empty()) continue;
          used_nodes.insert(l.other);
          used_edges.insert(l.edge);
          cur.nodes.push_back(l.other);
          cur.edges.push_back(l.edge);
          dfs(detail::closure(pattern, std::move(next)));
          cur.nodes.pop_back();
          cur.edges.pop_back();
          used_nodes.erase(l.other);
          used_edges.erase(l.edge);
          if (stop) return;
        }
      };
  dfs(detail::closure(pattern, {0}));
}

inline std::vector<Path> constrained_paths(const PolicyIndex& idx, Id from,
                                           const Pattern& pattern, bool inverse) {
  std::vector<Path> out;
  for_each_constrained_path(idx, from, pattern, inverse, [&](const Path& p) {
    out.push_back(p);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Path> constrained_paths(const PolicyGraph& g, Id from,
                                           const std::string& pattern, bool inverse) {
  PolicyIndex idx(g);
  return constrained_paths(idx, from, parse_pattern(pattern), inverse);
}

// First path found (DFS order) ending at `to` with >= min_length edges.
inline std::optional<Path> find_path(const PolicyIndex& idx, Id from, Id to,
                                     const Pattern& pattern, bool inverse,
                                     std::size_t min_length = 0) {
  std::optional<Path> found;
  for_each_constrained_path(idx, from, pattern, inverse, [&](const Path& p) {
    if (p.nodes.back() == to && p.length() >= min_length) {
      found = p;
      return false;
    }
    return true;
  });
  return found;
}

}  // namespace cbaco::policy
