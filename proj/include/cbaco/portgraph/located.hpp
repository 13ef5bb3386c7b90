#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "cbaco/portgraph/match.hpp"
#include "cbaco/portgraph/rewrite.hpp"

namespace cbaco::pg {

// A graph with a position subgraph (where rewriting may happen) and a banned
// subgraph (where it may not). Both are sets of element ids of `graph`.
struct LocatedGraph {
  PortGraph graph;
  IdSet position;
  IdSet banned;

  // Position = whole graph, nothing banned.
  static LocatedGraph whole(PortGraph g) {
    LocatedGraph out{std::move(g), {}, {}};
    out.position = out.graph.elements();
    return out;
  }

  bool operator==(const LocatedGraph&) const = default;
};

// L_W => R_M^N. `where` (W) is a set of lhs element ids; pos_rhs (M) and
// ban_rhs (N) are sets of rhs element ids.
struct LocatedRule {
  RewriteRule rule;
  std::optional<IdSet> where;
  IdSet pos_rhs;
  IdSet ban_rhs;

  const std::string& name() const { return rule.name; }
};

namespace detail {

inline IdSet intersect(const IdSet& a, const IdSet& b) {
  IdSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

}  // namespace detail

inline bool banned_clear(const LocatedGraph& g, const Morphism& f) {
  return detail::intersect(f.image(), g.banned).empty();
}

inline bool position_fits(const LocatedGraph& g, const LocatedRule& r,
                          const Morphism& f) {
  if (!r.where) return true;
  return detail::intersect(f.image(), g.position) == f.image_of(*r.where);
}

// Morphisms of the rule admissible under the located graph's position and
// banned subgraphs, in canonical order.
inline std::vector<Morphism> match_located(const LocatedGraph& g,
                                           const LocatedRule& r) {
  std::vector<Morphism> out;
  for (auto& f : match_rule(g.graph, r.rule))
    if (banned_clear(g, f) && position_fits(g, r, f)) out.push_back(std::move(f));
  return out;
}

// P' = (P \ f(L)) u f(M), Q' = Q u f(N). Re-attached edges keep their ids and
// hence their membership; extra copies inherit it from their original.
inline LocatedGraph apply_located_rule(const LocatedGraph& g,
                                       const LocatedRule& r,
                                       const Morphism& f) {
  if (!banned_clear(g, f))
    throw BannedViolation("rule " + r.name() + " matches the banned subgraph");
  if (!position_fits(g, r, f))
    throw PositionViolation("rule " + r.name() +
                            " does not meet its position constraint");
  auto t = apply_rule_traced(g.graph, r.rule, f);
  IdSet image = f.image();

  auto carry = [&](const IdSet& old_set, const IdSet& rhs_part) {
    IdSet out;
    for (Id x : old_set)
      if (!image.count(x) && t.graph.contains(x)) out.insert(x);
    for (Id x : rhs_part) out.insert(t.rhs_images.at(x));
    for (const auto& [copy, origin] : t.edge_copies)
      if (old_set.count(origin) && t.graph.contains(copy)) out.insert(copy);
    return out;
  };

  LocatedGraph out;
  out.position = carry(g.position, r.pos_rhs);
  out.banned = carry(g.banned, r.ban_rhs);
  out.graph = std::move(t.graph);
  return out;
}

}  // namespace cbaco::pg
