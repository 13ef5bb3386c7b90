#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cbaco/policy/redundancy.hpp"

namespace cbaco::policy {

struct Violation {
  std::string code;
  std::string message;
  std::vector<Id> elements;

  bool operator==(const Violation&) const = default;
};

inline std::string describe(const std::vector<Violation>& vs) {
  std::string out;
  for (const auto& v : vs) out += v.code + ": " + v.message + "\n";
  return out;
}

namespace detail {

inline bool is_name(const Value& v) { return v.is_string(); }
inline bool is_name_or_bottom(const Value& v) { return v.is_string() || v.is_bottom(); }

inline bool payload_fits(Kind k, const Value& ent) {
  auto tuple_of = [&](std::initializer_list<bool (*)(const Value&)> checks) {
    if (!ent.is_tuple() || ent.as_tuple().size() != checks.size()) return false;
    std::size_t i = 0;
    for (auto check : checks)
      if (!check(ent.as_tuple()[i++])) return false;
    return true;
  };
  switch (k) {
    case Kind::Pr:
      return tuple_of({is_name, is_name});
    case Kind::O:
      return tuple_of({is_name, is_name, is_name_or_bottom, is_name_or_bottom});
    case Kind::D:
      return tuple_of({is_name, is_name, is_name, is_name_or_bottom, is_name_or_bottom});
    default:
      return is_name(ent);
  }
}

inline const std::set<std::string>& node_attrs(Kind k) {
  static const std::map<Kind, std::set<std::string>> table = [] {
    std::map<Kind, std::set<std::string>> t;
    for (Kind k : all_kinds) t[k] = {"Name", "type", "ent"};
    t[Kind::E].insert({"now", "spec"});
    t[Kind::G].insert({"spec", "vars"});
    t[Kind::D].insert({"state", "origin"});
    return t;
  }();
  return table.at(k);
}

inline const std::set<std::string>& edge_attrs(const std::string& type) {
  static const std::map<std::string, std::set<std::string>> table = {
      {"PC", {"Name", "type", "aux"}},
      {"CC", {"Name", "type", "target", "auth", "obl"}},
      {"CPr", {"Name", "type", "auth"}},
      {"OG", {"Name", "type", "ge"}},
      {"DE", {"Name", "type", "ev"}},
      {"GG", {"Name", "type", "target"}},
      {"EE", {"Name", "type", "target"}},
  };
  static const std::set<std::string> plain = {"Name", "type"};
  auto it = table.find(type);
  return it == table.end() ? plain : it->second;
}

class Validator {
 public:
  explicit Validator(const PolicyGraph& g) : g_(g), idx_(g) {}

  std::vector<Violation> run() {
    nodes();
    edges();
    if (out_.empty()) semantic();
    return out_;
  }

 private:
  void add(std::string code, std::string msg, std::vector<Id> els) {
    out_.push_back({std::move(code), std::move(msg), std::move(els)});
  }

  std::string show(Id n) const {
    auto k = idx_.kind(n);
    return std::string(k ? to_string(*k) : "?") + " " + idx_.ent(n).str();
  }

  void nodes() {
    std::map<std::pair<Kind, Value>, Id> seen;
    std::vector<Id> now_nodes;
    for (const auto& [id, n] : g_.nodes()) {
      auto k = idx_.kind(id);
      if (!k) {
        add("BadNode", "node " + std::to_string(id) + " has no valid type", {id});
        continue;
      }
      if (pg::string_attr(n.attrs, "Name") != to_string(*k))
        add("BadNode", show(id) + ": Name differs from type", {id});
      if (!payload_fits(*k, idx_.ent(id)))
        add("BadNode", show(id) + ": ent does not fit type " + to_string(*k), {id});
      const auto& allowed = node_attrs(*k);
      for (const auto& [key, _] : n.attrs)
        if (!allowed.count(key))
          add("BadAttribute", show(id) + ": unexpected attribute " + key, {id});
      if (*k == Kind::E) {
        const Value* now = pg::find_attr(n.attrs, "now");
        if (!now || !now->is_bool())
          add("BadAttribute", show(id) + ": now must be a boolean", {id});
        else if (now->as_bool())
          now_nodes.push_back(id);
      }
      std::vector<std::string> want{main_port};
      if (has_direction_ports(*k)) want = {main_port, in_port, out_port};
      std::vector<std::string> have;
      for (Id p : n.ports) have.push_back(pg::string_attr(g_.port(p).attrs, "Name"));
      if (have != want) add("BadPort", show(id) + ": unexpected port layout", {id});
      auto [it, fresh] = seen.emplace(std::make_pair(*k, idx_.ent(id)), id);
      if (!fresh)
        add("DuplicateEntity", show(id) + " appears more than once", {it->second, id});
    }
    if (now_nodes.size() > 1)
      add("MultipleNow", std::to_string(now_nodes.size()) + " events are marked now",
          now_nodes);
  }

  void edges() {
    std::map<std::pair<Id, Id>, std::vector<Id>> by_adj;
    for (const auto& [id, e] : g_.edges()) {
      if (is_aux(g_, id)) continue;
      Id a = g_.port(e.a).node, b = g_.port(e.b).node;
      if (a == b) {
        add("SelfLoop", "edge " + std::to_string(id) + " joins " + show(a) + " to itself",
            {id});
        continue;
      }
      auto ka = idx_.kind(a), kb = idx_.kind(b);
      if (!ka || !kb) {
        add("BadEdge", "edge " + std::to_string(id) + " touches an untyped node", {id});
        continue;
      }
      by_adj[{std::min(a, b), std::max(a, b)}].push_back(id);
      auto t = edge_type(*ka, *kb);
      std::string declared = edge_type_of(g_, id);
      if (!t || *t != declared) {
        add("BadEdge",
            "edge " + std::to_string(id) + " between " + show(a) + " and " + show(b) +
                " matches no edge clause",
            {id});
        continue;
      }
      if (pg::string_attr(e.attrs, "Name") != declared)
        add("BadEdge", "edge " + std::to_string(id) + ": Name differs from type", {id});
      const auto& allowed = edge_attrs(declared);
      for (const auto& [key, _] : e.attrs)
        if (!allowed.count(key))
          add("BadAttribute",
              declared + " edge " + std::to_string(id) + ": unexpected attribute " + key,
              {id});
      clause(id, declared, (*ka <= *kb) ? a : b, (*ka <= *kb) ? b : a);
      ports(id, declared, e);
    }
    for (const auto& [adj, ids] : by_adj) {
      for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
          // Parallel CPr, OG or DE edges are fine when their role differs.
          std::string t = idx_.type(ids[i]);
          const char* role = t == "CPr" ? "auth" : t == "OG" ? "ge" : t == "DE" ? "ev" : nullptr;
          bool ok = role && idx_.type(ids[j]) == t &&
                    idx_.text(ids[i], role) != idx_.text(ids[j], role);
          if (!ok)
            add("DuplicateEdge",
                "edges " + std::to_string(ids[i]) + " and " + std::to_string(ids[j]) +
                    " join " + show(adj.first) + " and " + show(adj.second),
                {ids[i], ids[j]});
        }
    }
  }

  // Per-type attribute and payload agreement. x has the smaller kind.
  void clause(Id e, const std::string& t, Id x, Id y) {
    const Value& ex = idx_.ent(x);
    const Value& ey = idx_.ent(y);
    auto bad = [&](const std::string& why) {
      add("BadEdge", t + " edge " + std::to_string(e) + " between " + show(x) + " and " +
                         show(y) + ": " + why,
          {e});
    };
    auto is_bool = [&](const char* key) {
      const Value* v = idx_.attr(e, key);
      return v && v->is_bool();
    };
    auto item = [](const Value& tuple, std::size_t i) -> const Value& {
      return tuple.as_tuple().at(i);
    };
    if (!payload_fits(*idx_.kind(x), ex) || !payload_fits(*idx_.kind(y), ey)) return;
    if (t == "PC") {
      const Value* aux = idx_.attr(e, "aux");
      if (aux && !aux->is_bool()) bad("aux must be a boolean");
    } else if (t == "CC") {
      const Value* target = idx_.attr(e, "target");
      if (!target || !target->is_tuple()) {
        bad("target must be a set of the endpoint categories");
      } else {
        for (const auto& v : target->as_tuple())
          if (!(v == ex) && !(v == ey)) bad("target names a category not on the edge");
      }
      if (!is_bool("auth") || !is_bool("obl")) bad("auth and obl must be booleans");
    } else if (t == "CPr") {
      std::string auth = idx_.text(e, "auth");
      if (auth != "A" && auth != "B") bad("auth must be A or B");
    } else if (t == "PrA") {
      // x = A, y = Pr
      if (!(item(ey, 0) == ex)) bad("action differs from the permission's");
    } else if (t == "PrR") {
      if (!(item(ey, 1) == ex)) bad("resource differs from the permission's");
    } else if (t == "OPr") {
      // x = Pr, y = O
      if (!(item(ey, 0) == item(ex, 0)) || !(item(ey, 1) == item(ex, 1)))
        bad("obligation and permission disagree on (a, r)");
    } else if (t == "OG") {
      // x = G, y = O
      std::string ge = idx_.text(e, "ge");
      if (ge == "i") {
        if (!(item(ey, 2) == ex)) bad("initial scheme differs from the obligation's");
      } else if (ge == "f") {
        if (!(item(ey, 3) == ex)) bad("final scheme differs from the obligation's");
      } else {
        bad("ge must be i or f");
      }
    } else if (t == "DP") {
      // x = P, y = D
      if (!(item(ey, 0) == ex)) bad("duty principal differs");
    } else if (t == "DPr") {
      if (!(item(ey, 1) == item(ex, 0)) || !(item(ey, 2) == item(ex, 1)))
        bad("duty and permission disagree on (a, r)");
    } else if (t == "DE") {
      // x = E, y = D
      std::string ev = idx_.text(e, "ev");
      if (ev == "i") {
        if (!(item(ey, 3) == ex)) bad("start event differs from the duty's");
      } else if (ev == "f") {
        if (!(item(ey, 4) == ex)) bad("end event differs from the duty's");
      } else {
        bad("ev must be i or f");
      }
    } else if (t == "EE" || t == "GG") {
      const Value* target = idx_.attr(e, "target");
      if (!target || !(*target == ex || *target == ey))
        bad("target must be one of the endpoints");
    }
  }

  void ports(Id id, const std::string& t, const pg::EdgeData& e) {
    for (Id p : {e.a, e.b}) {
      Id n = g_.port(p).node;
      std::string want = main_port;
      if (is_directed_type(t)) want = idx_.targets(id, n) ? in_port : out_port;
      if (pg::string_attr(g_.port(p).attrs, "Name") != want)
        add("BadPort",
            t + " edge " + std::to_string(id) + " should attach to " + show(n) + "." + want,
            {id});
    }
  }

  // Redundancy and grant/ban conflicts; only meaningful on a typed graph.
  void semantic() {
    for (const auto& r : redundancies(idx_)) {
      auto [a, b] = idx_.ends(r.edge);
      add("RedundantEdge",
          idx_.type(r.edge) + " edge " + std::to_string(r.edge) + " between " + show(a) +
              " and " + show(b) + " is implied by a longer path",
          {r.edge});
    }
    static const Pattern grant = parse_pattern("PC, (->CC_Pr)*, CPr^A");
    static const Pattern ban = parse_pattern("PC, (<-CC_Pr)*, CPr^B");
    for (Id p : idx_.nodes_of(Kind::P)) {
      std::set<Id> granted, banned;
      for_each_constrained_path(idx_, p, grant, false, [&](const Path& path) {
        granted.insert(path.nodes.back());
        return true;
      });
      for_each_constrained_path(idx_, p, ban, true, [&](const Path& path) {
        banned.insert(path.nodes.back());
        return true;
      });
      for (Id pr : granted)
        if (banned.count(pr)) {
          const auto& ar = idx_.ent(pr).as_tuple();
          add("GrantBanConflict",
              "(" + idx_.ent(p).str() + ", " + ar[0].str() + ", " + ar[1].str() +
                  ") is both granted and banned",
              {p, pr});
        }
    }
  }

  const PolicyGraph& g_;
  PolicyIndex idx_;
  std::vector<Violation> out_;
};

}  // namespace detail

// Empty iff the graph is a well-formed policy graph.
inline std::vector<Violation> validate(const PolicyGraph& g) {
  return detail::Validator(g).run();
}

}  // namespace cbaco::policy
