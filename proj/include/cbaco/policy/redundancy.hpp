#pragma once

#include <string>
#include <vector>

#include "cbaco/policy/paths.hpp"

namespace cbaco::policy {

namespace detail {

// (edge, from, to, witness pattern, inverse) for every clause an edge is
// subject to. A directed edge is checked in each direction it points.
struct RedundancyCheck {
  Id edge;
  Id from;
  Id to;
  const char* pattern;
  bool inverse;
};

inline std::vector<RedundancyCheck> redundancy_checks(const PolicyIndex& idx, Id e) {
  std::vector<RedundancyCheck> out;
  auto [a, b] = idx.ends(e);
  if (a == b) return out;
  const std::string t = idx.type(e);
  auto oriented = [&](Kind first, auto&& fn) {
    if (idx.kind(a) == first) fn(a, b);
    else fn(b, a);
  };
  if (t == "PC") {
    oriented(Kind::P, [&](Id p, Id c) { out.push_back({e, p, c, "PC, (->CC)*", false}); });
  } else if (t == "CC") {
    for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
      if (!idx.targets(e, y)) continue;
      if (idx.flag(e, "auth")) out.push_back({e, x, y, "(->CC_Pr)*", false});
      if (idx.flag(e, "obl")) out.push_back({e, x, y, "(->CC_O)*", false});
    }
  } else if (t == "CPr") {
    std::string auth = idx.text(e, "auth");
    oriented(Kind::C, [&](Id c, Id pr) {
      if (auth == "A") out.push_back({e, c, pr, "(->CC_Pr)*, CPr^A", false});
      if (auth == "B") out.push_back({e, c, pr, "(<-CC_Pr)*, CPr^B", true});
    });
  } else if (t == "CO") {
    oriented(Kind::C, [&](Id c, Id o) { out.push_back({e, c, o, "(->CC_O)*, CO", false}); });
  } else if (t == "EG") {
    oriented(Kind::E, [&](Id ev, Id g) { out.push_back({e, ev, g, "EG, (->GG)*", false}); });
  } else if (t == "GG") {
    for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}})
      if (idx.targets(e, y)) out.push_back({e, x, y, "(->GG)*", false});
  }
  return out;
}

}  // namespace detail

// Witness of a redundant edge: a typed path of length >= 2 between its ends.
struct Redundancy {
  Id edge;
  Path witness;
};

inline std::vector<Redundancy> redundancies(const PolicyIndex& idx) {
  std::vector<Redundancy> out;
  for (Id e : idx.edges())
    for (const auto& c : detail::redundancy_checks(idx, e))
      if (auto w = find_path(idx, c.from, c.to, parse_pattern(c.pattern), c.inverse, 2)) {
        out.push_back({e, *w});
        break;
      }
  return out;
}

inline IdSet find_redundant_edges(const PolicyGraph& g) {
  PolicyIndex idx(g);
  IdSet out;
  for (const auto& r : redundancies(idx)) out.insert(r.edge);
  return out;
}

}  // namespace cbaco::policy
