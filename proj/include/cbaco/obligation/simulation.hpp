#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cbaco/obligation/event.hpp"
#include "cbaco/policy/extract.hpp"

namespace cbaco::obl {

using policy::Duty;
using policy::Id;
using policy::Kind;
using policy::Name;
using policy::Obligation;
using policy::PolicyGraph;
using policy::PolicyIndex;

enum class DutyTag { pending, fulfilled, violated };

inline const char* to_string(DutyTag t) {
  switch (t) {
    case DutyTag::pending: return "pending";
    case DutyTag::fulfilled: return "fulfilled";
    case DutyTag::violated: return "violated";
  }
  return "?";
}

inline std::optional<DutyTag> tag_from_string(const std::string& s) {
  for (DutyTag t : {DutyTag::pending, DutyTag::fulfilled, DutyTag::violated})
    if (s == to_string(t)) return t;
  return std::nullopt;
}

struct DutyState {
  DutyTag tag = DutyTag::pending;
  std::optional<Event> fulfilling_event;

  bool operator==(const DutyState&) const = default;
};

inline Event event_of(const PolicyGraph& g, Id n) {
  const auto& attrs = g.node(n).attrs;
  const Value* spec = pg::find_attr(attrs, "spec");
  return {policy::node_ent(g, n).str(), spec ? value_record(*spec) : Record{}};
}

inline EventScheme scheme_of(const PolicyGraph& g, Id n) {
  const auto& attrs = g.node(n).attrs;
  const Value* spec = pg::find_attr(attrs, "spec");
  const Value* vars = pg::find_attr(attrs, "vars");
  return {policy::node_ent(g, n).str(), vars ? value_names(*vars) : std::vector<std::string>{},
          spec ? value_record(*spec) : Record{}};
}

inline Id add_scheme_node(PolicyGraph& g, const EventScheme& s) {
  check_scheme(s);
  return policy::add_entity(g, Kind::G, Value(s.name),
                            {{"spec", record_value(s.pattern)}, {"vars", names_value(s.vars)}});
}

inline Id add_event_node(PolicyGraph& g, const Event& e) {
  check_event(e);
  return policy::add_entity(g, Kind::E, Value(e.id),
                            {{"now", Value(false)}, {"spec", record_value(e.spec)}});
}

// EG edges to the most specific schemes the event instantiates (the general
// ones follow through ->GG), plus EP/EA/ER edges to its subject, action and
// object when those entities exist.
inline void link_event(PolicyGraph& g, Id en) {
  Event ev = event_of(g, en);
  std::vector<Id> matching;
  std::vector<std::pair<Kind, std::string>> ends = {
      {Kind::P, ev.subj()}, {Kind::A, ev.act()}, {Kind::R, ev.obj()}};
  std::vector<Id> others;
  {
    PolicyIndex idx(g);
    for (Id s : idx.nodes_of(Kind::G))
      if (event_matches_scheme(ev, scheme_of(g, s))) matching.push_back(s);
    static const policy::Pattern up = policy::parse_pattern("(->GG)*");
    std::set<Id> implied;
    for (Id s : matching)
      for (Id t : policy::detail::reach(idx, s, up))
        if (t != s) implied.insert(t);
    std::erase_if(matching, [&](Id s) { return implied.count(s) > 0; });
    for (const auto& [k, name] : ends)
      if (auto n = idx.find(k, Value(name))) others.push_back(*n);
  }
  for (Id s : matching) policy::connect(g, en, s);
  for (Id n : others) policy::connect(g, en, n);
}

// The evolving policy graph together with the current history: `chain` lists
// its E nodes in order, the first `processed` of which have happened.
struct SimulationState {
  PolicyGraph graph;
  std::vector<Id> chain;
  std::size_t processed = 0;
  std::set<std::pair<Name, Obligation>> opa;

  std::vector<Event> history() const {
    std::vector<Event> out;
    for (std::size_t i = 0; i < processed; ++i) out.push_back(event_of(graph, chain[i]));
    return out;
  }

  std::vector<Event> recorded() const {
    std::vector<Event> out;
    for (Id n : chain) out.push_back(event_of(graph, n));
    return out;
  }

  std::vector<Duty> duties() const {
    std::vector<Duty> out;
    for (const auto& [id, n] : graph.nodes())
      if (policy::node_kind(graph, id) == Kind::D)
        out.push_back(Duty::from_ent(policy::node_ent(graph, id)));
    std::sort(out.begin(), out.end());
    return out;
  }

  std::optional<Id> duty_node(const Duty& d) const {
    Value ent = d.ent();
    for (const auto& [id, n] : graph.nodes())
      if (policy::node_kind(graph, id) == Kind::D && policy::node_ent(graph, id) == ent)
        return id;
    return std::nullopt;
  }

  std::optional<Obligation> origin(const Duty& d) const {
    auto n = duty_node(d);
    if (!n) return std::nullopt;
    const Value* o = pg::find_attr(graph.node(*n).attrs, "origin");
    if (!o || !o->is_tuple()) return std::nullopt;
    return Obligation::from_ent(*o);
  }

  std::optional<std::int64_t> now_time() const {
    if (processed == 0) return std::nullopt;
    return event_of(graph, chain[processed - 1]).time();
  }
};

inline DutyState duty_state(const SimulationState& s, const Duty& d) {
  if (!s.duty_node(d))
    throw UnknownDuty("no duty (" + d.principal + ", " + d.action + ", " + d.resource + ")");
  // Position 0 is the implicit initial event; event chain[i] sits at i + 1.
  auto position = [&](const std::optional<Name>& e) -> std::optional<std::size_t> {
    if (!e) return std::nullopt;
    for (std::size_t i = 0; i < s.processed; ++i)
      if (policy::node_ent(s.graph, s.chain[i]) == Value(*e)) return i + 1;
    return std::nullopt;
  };
  std::size_t start = 0;
  if (d.start_event) {
    auto p = position(d.start_event);
    if (!p) throw UnknownDuty("start event " + *d.start_event + " is not in the history");
    start = *p;
  }
  auto end = position(d.end_event);
  std::size_t last = end ? *end - 1 : s.processed;
  for (std::size_t i = start + 1; i <= last; ++i) {
    Event e = event_of(s.graph, s.chain[i - 1]);
    if (e.subj() == d.principal && e.act() == d.action && e.obj() == d.resource)
      return {DutyTag::fulfilled, e};
  }
  return {end ? DutyTag::violated : DutyTag::pending, std::nullopt};
}

namespace detail {

inline std::set<std::pair<Name, Obligation>> obligation_assignments(const PolicyGraph& g) {
  PolicyIndex idx(g);
  static const policy::Pattern owes = policy::parse_pattern("PC, (->CC_O)*, CO");
  std::set<std::pair<Name, Obligation>> out;
  for (Id p : idx.nodes_of(Kind::P))
    for (Id o : policy::detail::reach(idx, p, owes))
      out.insert({idx.ent(p).str(), Obligation::from_ent(idx.ent(o))});
  return out;
}

inline std::optional<Bindings> scheme_bindings(const PolicyIndex& idx, const Event& e,
                                               const std::optional<Name>& scheme) {
  if (!scheme) return std::nullopt;
  auto n = idx.find(Kind::G, Value(*scheme));
  if (!n) return std::nullopt;
  return event_matches_scheme(e, scheme_of(idx.graph(), *n));
}

// Shared variables of the two schemes must bind to the same values.
inline bool bindings_agree(const std::optional<Bindings>& a, const std::optional<Bindings>& b) {
  if (!a || !b) return true;
  for (const auto& [k, v] : *a) {
    auto it = b->find(k);
    if (it != b->end() && !(it->second == v)) return false;
  }
  return true;
}

inline Id ensure_permission(PolicyGraph& g, const Name& a, const Name& r) {
  PolicyIndex idx(g);
  Value ent = Value::tuple({a, r});
  if (auto pr = idx.find(Kind::Pr, ent)) return *pr;
  auto an = idx.find(Kind::A, Value(a));
  auto rn = idx.find(Kind::R, Value(r));
  Id pr = policy::add_entity(g, Kind::Pr, ent);
  if (an) policy::connect(g, pr, *an);
  if (rn) policy::connect(g, pr, *rn);
  return pr;
}

inline void open_duty(SimulationState& s, const Name& p, const Obligation& o,
                      const std::optional<Name>& start) {
  for (const Duty& d : s.duties())
    if (d.principal == p && d.action == o.action && d.resource == o.resource &&
        d.start_event == start)
      return;
  Duty d{p, o.action, o.resource, start, std::nullopt};
  auto& g = s.graph;
  Id dn = policy::add_entity(g, Kind::D, d.ent(),
                             {{"state", Value(to_string(DutyTag::pending))}, {"origin", o.ent()}});
  Id pr = ensure_permission(g, o.action, o.resource);
  PolicyIndex idx(g);
  if (auto pn = idx.find(Kind::P, Value(p))) policy::connect(g, dn, *pn);
  policy::connect(g, dn, pr);
  if (start)
    if (auto en = idx.find(Kind::E, Value(*start))) policy::connect(g, dn, *en, {{"ev", Value("i")}});
}

// Happens chain[k]: close open duties whose end scheme it instantiates, then
// open duties whose start scheme it instantiates.
inline void process(SimulationState& s, std::size_t k) {
  auto& g = s.graph;
  Id en = s.chain[k];
  if (k == 0)
    for (const auto& [p, o] : s.opa)
      if (!o.start_scheme) open_duty(s, p, o, std::nullopt);

  Event ev = event_of(g, en);
  std::set<Name> instances;
  std::vector<std::pair<Id, Duty>> closing;
  {
    PolicyIndex idx(g);
    static const policy::Pattern inst = policy::parse_pattern("EG, (->GG)*");
    for (Id ge : policy::detail::reach(idx, en, inst)) instances.insert(idx.ent(ge).str());
    for (Id dn : idx.nodes_of(Kind::D)) {
      Duty d = Duty::from_ent(idx.ent(dn));
      const Value* ov = pg::find_attr(g.node(dn).attrs, "origin");
      if (d.end_event || !ov) continue;
      Obligation o = Obligation::from_ent(*ov);
      if (!o.end_scheme || !instances.count(*o.end_scheme)) continue;
      std::optional<Bindings> opening;
      if (d.start_event)
        if (auto sn = idx.find(Kind::E, Value(*d.start_event)))
          opening = scheme_bindings(idx, event_of(g, *sn), o.start_scheme);
      if (bindings_agree(opening, scheme_bindings(idx, ev, o.end_scheme)))
        closing.push_back({dn, d});
    }
  }
  for (auto& [dn, d] : closing) {
    d.end_event = ev.id;
    g.set_attr(dn, "ent", d.ent());
    policy::connect(g, dn, en, {{"ev", Value("f")}});
  }
  for (const auto& [p, o] : s.opa)
    if (o.start_scheme && instances.count(*o.start_scheme)) open_duty(s, p, o, ev.id);

  for (const auto& [id, n] : g.nodes())
    if (policy::node_kind(g, id) == Kind::E) g.set_attr(id, "now", Value(id == en));
  s.processed = k + 1;
  for (const Duty& d : s.duties())
    g.set_attr(*s.duty_node(d), "state", Value(to_string(duty_state(s, d).tag)));
}

inline void check_time(const SimulationState& s, const Event& e) {
  if (auto t = s.now_time(); t && e.time() < *t)
    throw TimeRegression("event " + e.id + " at time " + std::to_string(e.time()) +
                         " precedes the current time " + std::to_string(*t));
}

}  // namespace detail

// Simulation state of a policy graph: duty nodes are dropped and recomputed by
// replaying the current history up to the now marker. The current history is
// the event chain holding the now event, or the only chain if none is marked.
inline SimulationState from_policy(const PolicyGraph& g) {
  SimulationState s;
  s.graph = g;
  std::vector<Id> duties;
  std::optional<Id> now;
  for (const auto& [id, n] : g.nodes()) {
    auto k = policy::node_kind(g, id);
    if (k == Kind::D) duties.push_back(id);
    if (k == Kind::E) {
      const Value* v = pg::find_attr(n.attrs, "now");
      if (v && v->is_bool() && v->as_bool()) {
        if (now) throw HistoryConflict("more than one event is marked now");
        now = id;
      }
      s.graph.set_attr(id, "now", Value(false));
    }
  }
  for (Id d : duties) s.graph.remove_node(d);

  auto chains = policy::detail::event_chains(PolicyIndex(s.graph));
  std::size_t upto = 0;
  if (now) {
    for (const auto& c : chains) {
      auto it = std::find(c.begin(), c.end(), *now);
      if (it != c.end()) {
        s.chain = c;
        upto = static_cast<std::size_t>(it - c.begin()) + 1;
        break;
      }
    }
  } else if (chains.size() == 1) {
    s.chain = chains.front();
  } else if (chains.size() > 1) {
    throw HistoryConflict(std::to_string(chains.size()) +
                          " event histories and no event is marked now");
  }
  s.opa = detail::obligation_assignments(s.graph);
  for (std::size_t k = 0; k < upto; ++k) {
    detail::check_time(s, event_of(s.graph, s.chain[k]));
    detail::process(s, k);
  }
  return s;
}

// Processes the next event. If the graph already records events beyond now,
// `e` must be the next of them; otherwise it is appended to the history.
inline SimulationState inject_event(const SimulationState& state, const Event& e) {
  check_event(e);
  SimulationState s = state;
  detail::check_time(s, e);
  if (s.processed < s.chain.size()) {
    Event next = event_of(s.graph, s.chain[s.processed]);
    if (next.id != e.id)
      throw HistoryConflict("the recorded history continues with " + next.id + ", not " + e.id);
    if (next.spec != e.spec)
      throw HistoryConflict("event " + e.id + " differs from the recorded one");
  } else {
    if (PolicyIndex(s.graph).find(Kind::E, Value(e.id)))
      throw DuplicateEvent("event " + e.id + " already exists");
    Id en = add_event_node(s.graph, e);
    if (!s.chain.empty()) policy::connect(s.graph, s.chain.back(), en, {{"target", Value(e.id)}});
    link_event(s.graph, en);
    s.chain.push_back(en);
  }
  detail::process(s, s.processed);
  return s;
}

}  // namespace cbaco::obl
