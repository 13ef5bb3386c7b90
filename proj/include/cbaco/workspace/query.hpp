#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cbaco/obligation/simulation.hpp"
#include "cbaco/workspace/policy_file.hpp"

namespace cbaco::ws {

struct DutyEntry {
  policy::Duty duty;
  obl::DutyState state;
  std::optional<policy::Obligation> origin;
  std::optional<obl::Event> trigger;  // absent for duties owed from the start
};

using DutyReport = std::vector<DutyEntry>;

// Current duties, optionally restricted to one principal and/or one state.
inline DutyReport query_duties(const obl::SimulationState& s,
                               const std::optional<std::string>& principal = std::nullopt,
                               const std::optional<obl::DutyTag>& tag = std::nullopt) {
  DutyReport out;
  policy::PolicyIndex idx(s.graph);
  for (const auto& d : s.duties()) {
    if (principal && d.principal != *principal) continue;
    auto st = obl::duty_state(s, d);
    if (tag && st.tag != *tag) continue;
    DutyEntry e{d, st, s.origin(d), std::nullopt};
    if (d.start_event)
      if (auto n = idx.find(policy::Kind::E, pg::Value(*d.start_event))) e.trigger = obl::event_of(s.graph, *n);
    out.push_back(std::move(e));
  }
  return out;
}

inline json to_json(const policy::Duty& d) {
  auto opt = [](const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); };
  return {{"principal", d.principal}, {"action", d.action}, {"resource", d.resource},
          {"start", opt(d.start_event)}, {"end", opt(d.end_event)}};
}

inline json to_json(const policy::Obligation& o) {
  auto opt = [](const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); };
  return {{"action", o.action}, {"resource", o.resource},
          {"start_scheme", opt(o.start_scheme)}, {"end_scheme", opt(o.end_scheme)}};
}

inline json to_json(const DutyEntry& e) {
  json j = to_json(e.duty);
  j["state"] = obl::to_string(e.state.tag);
  j["fulfilled_by"] = e.state.fulfilling_event ? event_to_json(*e.state.fulfilling_event) : json(nullptr);
  j["origin"] = e.origin ? to_json(*e.origin) : json(nullptr);
  j["trigger"] = e.trigger ? event_to_json(*e.trigger) : json(nullptr);
  return j;
}

inline json to_json(const DutyReport& r) {
  json out = json::array();
  for (const auto& e : r) out.push_back(to_json(e));
  return out;
}

}  // namespace cbaco::ws
