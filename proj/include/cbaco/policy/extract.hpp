#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cbaco/policy/validate.hpp"

namespace cbaco::policy {

using Name = std::string;
using Triple = std::tuple<Name, Name, Name>;

struct Obligation {
  Name action;
  Name resource;
  std::optional<Name> start_scheme;
  std::optional<Name> end_scheme;

  auto key() const { return std::tie(action, resource, start_scheme, end_scheme); }
  bool operator==(const Obligation& o) const { return key() == o.key(); }
  bool operator<(const Obligation& o) const { return key() < o.key(); }

  Value ent() const {
    return Value::tuple({action, resource, opt_value(start_scheme), opt_value(end_scheme)});
  }
  static Obligation from_ent(const Value& v) {
    const auto& t = v.as_tuple();
    return {t[0].as_string(), t[1].as_string(), value_opt(t[2]), value_opt(t[3])};
  }
};

struct Duty {
  Name principal;
  Name action;
  Name resource;
  std::optional<Name> start_event;
  std::optional<Name> end_event;

  auto key() const {
    return std::tie(principal, action, resource, start_event, end_event);
  }
  bool operator==(const Duty& o) const { return key() == o.key(); }
  bool operator<(const Duty& o) const { return key() < o.key(); }

  Value ent() const {
    return Value::tuple({principal, action, resource, opt_value(start_event),
                         opt_value(end_event)});
  }
  static Duty from_ent(const Value& v) {
    const auto& t = v.as_tuple();
    return {t[0].as_string(), t[1].as_string(), t[2].as_string(), value_opt(t[3]),
            value_opt(t[4])};
  }
};

using History = std::vector<Name>;

struct PolicyRelations {
  std::set<Name> P, C, A, R, E, G;
  std::set<History> H;
  std::set<std::pair<Name, Name>> subset_auth;  // (c, c') with c ⊆ c'
  std::set<std::pair<Name, Name>> subset_obl;
  std::set<std::pair<Name, Name>> PCA;
  std::set<Triple> ARCA;  // (a, r, c)
  std::set<Triple> PAR;   // (p, a, r)
  std::set<Triple> BARCA;
  std::set<Triple> BAR;
  std::set<Triple> UNDET;
  std::set<std::pair<Obligation, Name>> OCA;
  std::set<std::pair<Name, Obligation>> OPA;
  std::set<Duty> DA;
  std::set<std::pair<Name, Name>> ET;  // (event, scheme)
  std::set<std::tuple<Name, Name, History>> EI;

  bool operator==(const PolicyRelations&) const = default;
};

namespace detail {

inline std::set<Name> names_of(const PolicyIndex& idx, Kind k) {
  std::set<Name> out;
  for (Id n : idx.nodes_of(k)) out.insert(idx.ent(n).str());
  return out;
}

inline std::set<Id> reach(const PolicyIndex& idx, Id from, const Pattern& p,
                          bool inverse = false) {
  std::set<Id> out;
  for_each_constrained_path(idx, from, p, inverse, [&](const Path& path) {
    out.insert(path.nodes.back());
    return true;
  });
  return out;
}

// Maximal simple (->EE)* chains.
inline std::vector<std::vector<Id>> event_chains(const PolicyIndex& idx) {
  static const Pattern chain = parse_pattern("(->EE)*");
  auto forward = [&](Id from, Id to) {
    for (const auto& l : idx.links(from))
      if (l.other == to && idx.type(l.edge) == "EE" && idx.targets(l.edge, to)) return true;
    return false;
  };
  std::vector<std::vector<Id>> out;
  for (Id start : idx.nodes_of(Kind::E)) {
    bool has_pred = false;
    for (const auto& l : idx.links(start))
      if (forward(l.other, start) && idx.kind(l.other) == Kind::E) has_pred = true;
    for_each_constrained_path(idx, start, chain, false, [&](const Path& path) {
      std::set<Id> on(path.nodes.begin(), path.nodes.end());
      Id last = path.nodes.back();
      for (const auto& l : idx.links(last))
        if (!on.count(l.other) && idx.kind(l.other) == Kind::E && forward(last, l.other))
          return true;
      if (has_pred) {
        for (const auto& l : idx.links(start))
          if (!on.count(l.other) && forward(l.other, start)) return true;
      }
      out.push_back(path.nodes);
      return true;
    });
  }
  return out;
}

}  // namespace detail

// Relations of the policy a well-formed graph denotes. Auxiliary edges are
// ignored.
inline PolicyRelations extract_policy(const PolicyGraph& g) {
  auto violations = validate(g);
  if (!violations.empty()) {
    std::vector<std::string> details;
    for (const auto& v : violations) details.push_back(v.code + ": " + v.message);
    throw NotWellFormed("policy graph is not well-formed", details);
  }
  PolicyIndex idx(g);
  PolicyRelations rel;
  rel.P = detail::names_of(idx, Kind::P);
  rel.C = detail::names_of(idx, Kind::C);
  rel.A = detail::names_of(idx, Kind::A);
  rel.R = detail::names_of(idx, Kind::R);
  rel.E = detail::names_of(idx, Kind::E);
  rel.G = detail::names_of(idx, Kind::G);

  static const Pattern up_auth = parse_pattern("(->CC_Pr)*");
  static const Pattern up_obl = parse_pattern("(->CC_O)*");
  static const Pattern grant = parse_pattern("PC, (->CC_Pr)*, CPr^A");
  static const Pattern ban = parse_pattern("PC, (<-CC_Pr)*, CPr^B");
  static const Pattern owes = parse_pattern("PC, (->CC_O)*, CO");
  static const Pattern inst = parse_pattern("EG, (->GG)*");

  for (Id c : idx.nodes_of(Kind::C)) {
    for (Id d : detail::reach(idx, c, up_auth))
      rel.subset_auth.insert({idx.ent(c).str(), idx.ent(d).str()});
    for (Id d : detail::reach(idx, c, up_obl))
      rel.subset_obl.insert({idx.ent(c).str(), idx.ent(d).str()});
  }

  for (Id e : idx.edges()) {
    auto [x, y] = idx.ends(e);
    if (idx.kind(x) > idx.kind(y)) std::swap(x, y);
    std::string t = idx.type(e);
    if (t == "PC") {
      rel.PCA.insert({idx.ent(x).str(), idx.ent(y).str()});
    } else if (t == "CPr") {
      const auto& ar = idx.ent(y).as_tuple();
      Triple entry{ar[0].str(), ar[1].str(), idx.ent(x).str()};
      (idx.text(e, "auth") == "A" ? rel.ARCA : rel.BARCA).insert(entry);
    } else if (t == "CO") {
      rel.OCA.insert({Obligation::from_ent(idx.ent(y)), idx.ent(x).str()});
    }
  }

  for (Id p : idx.nodes_of(Kind::P)) {
    std::string pn = idx.ent(p).str();
    for (Id pr : detail::reach(idx, p, grant)) {
      const auto& ar = idx.ent(pr).as_tuple();
      rel.PAR.insert({pn, ar[0].str(), ar[1].str()});
    }
    for (Id pr : detail::reach(idx, p, ban, true)) {
      const auto& ar = idx.ent(pr).as_tuple();
      rel.BAR.insert({pn, ar[0].str(), ar[1].str()});
    }
    for (Id o : detail::reach(idx, p, owes))
      rel.OPA.insert({pn, Obligation::from_ent(idx.ent(o))});
  }
  for (const auto& p : rel.P)
    for (const auto& a : rel.A)
      for (const auto& r : rel.R) {
        Triple t{p, a, r};
        if (!rel.PAR.count(t) && !rel.BAR.count(t)) rel.UNDET.insert(t);
      }

  for (Id d : idx.nodes_of(Kind::D)) rel.DA.insert(Duty::from_ent(idx.ent(d)));

  for (Id e : idx.nodes_of(Kind::E))
    for (Id ge : detail::reach(idx, e, inst))
      rel.ET.insert({idx.ent(e).str(), idx.ent(ge).str()});

  for (const auto& chain : detail::event_chains(idx)) {
    History h;
    for (Id n : chain) h.push_back(idx.ent(n).str());
    rel.H.insert(h);
    for (std::size_t j = 0; j < h.size(); ++j)
      for (std::size_t k = j + 1; k < h.size(); ++k) rel.EI.insert({h[j], h[k], h});
  }
  return rel;
}

}  // namespace cbaco::policy
