#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cbaco/policy/decide.hpp"
#include "cbaco/policy/rules.hpp"
#include "cbaco/strategy/interpreter.hpp"
#include "cbaco/strategy/parser.hpp"
#include "cbaco/workspace/export.hpp"
#include "cbaco/workspace/query.hpp"

namespace cbaco::svc {

using nlohmann::json;

// Class name of a library error, for machine-readable reports.
inline std::string error_name(const std::exception& e) {
#define CBACO_ERROR_NAME(T) \
  if (dynamic_cast<const T*>(&e)) return #T;
  CBACO_ERROR_NAME(InvalidMorphism)
  CBACO_ERROR_NAME(InvalidRule)
  CBACO_ERROR_NAME(PositionViolation)
  CBACO_ERROR_NAME(BannedViolation)
  CBACO_ERROR_NAME(SyntaxError)
  CBACO_ERROR_NAME(UnknownRule)
  CBACO_ERROR_NAME(BudgetExceeded)
  CBACO_ERROR_NAME(NotAPath)
  CBACO_ERROR_NAME(NotWellFormed)
  CBACO_ERROR_NAME(UnknownEntity)
  CBACO_ERROR_NAME(TimeRegression)
  CBACO_ERROR_NAME(HistoryConflict)
  CBACO_ERROR_NAME(DuplicateEvent)
  CBACO_ERROR_NAME(UnknownDuty)
  CBACO_ERROR_NAME(ParseError)
  CBACO_ERROR_NAME(TypeError)
#undef CBACO_ERROR_NAME
  return "Error";
}

inline json error_json(const std::exception& e) {
  json j = {{"error", error_name(e)}, {"message", e.what()}};
  if (auto nw = dynamic_cast<const NotWellFormed*>(&e)) j["details"] = nw->details();
  if (auto se = dynamic_cast<const SyntaxError*>(&e)) {
    j["line"] = se->line();
    j["column"] = se->column();
  }
  return j;
}

// Rules available to strategies run against a policy.
inline const strat::RuleSet& policy_rules() {
  static const strat::RuleSet rules{{"auxPC", policy::aux_pc_rule()}};
  return rules;
}

inline json violations_json(const std::vector<policy::Violation>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back({{"code", v.code}, {"message", v.message}, {"elements", v.elements}});
  return out;
}

inline void require_well_formed(const policy::PolicyGraph& g) {
  auto vs = policy::validate(g);
  if (vs.empty()) return;
  std::vector<std::string> details;
  for (const auto& v : vs) details.push_back(v.code + ": " + v.message);
  throw NotWellFormed("policy is not well-formed", details);
}

inline json decision_json(const policy::AuthorizationDecision& d) {
  return {{"verdict", policy::to_string(d.verdict)}, {"path", d.names}, {"note", d.note}};
}

// Duty key that survives the duty being closed.
using DutyKey = std::tuple<std::string, std::string, std::string, std::optional<std::string>>;

inline std::map<DutyKey, ws::DutyEntry> duties_by_key(const obl::SimulationState& s) {
  std::map<DutyKey, ws::DutyEntry> out;
  for (auto& e : ws::query_duties(s))
    out.emplace(DutyKey{e.duty.principal, e.duty.action, e.duty.resource, e.duty.start_event}, e);
  return out;
}

// Duties that appeared or changed state between two simulation states.
inline json duty_delta(const obl::SimulationState& before, const obl::SimulationState& after) {
  auto old = duties_by_key(before);
  json created = json::array(), changed = json::array();
  for (const auto& [k, e] : duties_by_key(after)) {
    auto it = old.find(k);
    if (it == old.end()) {
      created.push_back(ws::to_json(e));
    } else if (it->second.state.tag != e.state.tag || it->second.duty.end_event != e.duty.end_event) {
      json j = ws::to_json(e);
      j["previous_state"] = obl::to_string(it->second.state.tag);
      changed.push_back(std::move(j));
    }
  }
  return {{"created", created}, {"changed", changed}};
}

// One what-if session: the simulation state and the derivation tree of every
// state reached from the loaded policy. `current` indexes the tree node
// holding the present state.
struct Session {
  std::string id;
  obl::SimulationState sim;
  strat::DerivationTree tree;
  std::size_t current = 0;
  std::chrono::system_clock::time_point created = std::chrono::system_clock::now();
  mutable std::shared_mutex mu;

  Session(std::string id_, obl::SimulationState s)
      : id(std::move(id_)), sim(std::move(s)), tree(pg::LocatedGraph::whole(sim.graph)) {}

  Session(std::string id_, const Session& from)
      : id(std::move(id_)), sim(from.sim), tree(from.tree), current(from.current) {}

  json summary() const {
    json hist = json::array();
    for (const auto& e : sim.history()) hist.push_back(e.id);
    return {{"id", id},
            {"created", std::chrono::duration_cast<std::chrono::seconds>(created.time_since_epoch()).count()},
            {"history", hist},
            {"recorded", sim.chain.size()},
            {"derivation_nodes", tree.size()}};
  }

  json graph(const ws::ViewFilter& f) const {
    return {{"session", id}, {"graph", ws::export_json(sim.graph, f)}};
  }

  json decide(const std::string& p, const std::string& a, const std::string& r) const {
    return decision_json(policy::decide(sim.graph, p, a, r));
  }

  json duties(const std::optional<std::string>& principal, const std::optional<obl::DutyTag>& tag) const {
    return {{"session", id}, {"duties", ws::to_json(ws::query_duties(sim, principal, tag))}};
  }

  json inject(const std::vector<obl::Event>& events) {
    obl::SimulationState next = sim;
    for (const auto& e : events) next = obl::inject_event(next, e);
    json delta = duty_delta(sim, next);
    sim = std::move(next);
    for (const auto& e : events)
      current = tree.add(current, pg::LocatedGraph::whole(sim.graph), "event", e.id);
    delta["history"] = json::array();
    for (const auto& e : sim.history()) delta["history"].push_back(e.id);
    delta["derivation"] = current;
    return delta;
  }

  json run_strategy(const std::string& text, const strat::EvalOptions& opts) {
    auto ast = strat::parse_strategy(text);
    auto res = strat::eval_strategy(pg::LocatedGraph::whole(sim.graph), ast, policy_rules(), opts);
    std::size_t first = tree.size();
    std::vector<std::size_t> index(res.tree.size(), current);
    for (std::size_t i = 1; i < res.tree.size(); ++i) {
      const auto& n = res.tree.at(i);
      index[i] = tree.add(index[*n.parent], n.state, n.rule, n.digest);
    }
    if (res.success) {
      obl::SimulationState next = sim;
      next.graph = res.state.graph;
      bool chain_intact = true;
      for (auto n : next.chain) chain_intact = chain_intact && next.graph.has_node(n);
      sim = chain_intact ? std::move(next) : obl::from_policy(res.state.graph);
      if (res.tree.size() > 1) current = index.back();
    }
    return {{"success", res.success},
            {"applications", res.applications},
            {"steps", res.steps},
            {"derivation", tree.to_json(false, first)},
            {"current", current}};
  }

  std::string export_text(const std::string& format, const ws::ViewFilter& f) const {
    if (format == "dot") return ws::export_dot(sim.graph, f);
    if (format == "json") return ws::export_json(sim.graph, f).dump(2) + "\n";
    if (format == "policy") return ws::save_policy(sim.graph);
    throw ParseError("unknown export format " + format);
  }
};

// Sessions by id. The map is guarded by its own mutex; each session carries
// a reader/writer lock so sessions run independently.
class SessionStore {
 public:
  std::shared_ptr<Session> create(const policy::PolicyGraph& g) {
    require_well_formed(g);
    auto s = std::make_shared<Session>(fresh_id(), obl::from_policy(g));
    std::lock_guard lock(mu_);
    sessions_[s->id] = s;
    return s;
  }

  std::shared_ptr<Session> get(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  std::shared_ptr<Session> fork(const Session& parent) {
    std::shared_ptr<Session> child;
    {
      std::shared_lock read(parent.mu);
      child = std::make_shared<Session>(fresh_id(), parent);
    }
    std::lock_guard lock(mu_);
    sessions_[child->id] = child;
    return child;
  }

  bool erase(const std::string& id) {
    std::lock_guard lock(mu_);
    return sessions_.erase(id) > 0;
  }

  std::vector<std::string> ids() const {
    std::lock_guard lock(mu_);
    std::vector<std::string> out;
    for (const auto& [id, _] : sessions_) out.push_back(id);
    return out;
  }

  // Writes each session's current graph as a policy file <dir>/<id>.cbaco.
  void save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    for (const auto& id : ids()) {
      auto s = get(id);
      if (!s) continue;
      std::shared_lock read(s->mu);
      std::ofstream out(dir / (id + ".cbaco"));
      out << ws::save_policy(s->sim.graph);
    }
  }

  // Restores sessions saved by save(); returns how many were loaded.
  std::size_t load(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) return 0;
    std::size_t n = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() != ".cbaco") continue;
      std::ifstream in(entry.path());
      std::stringstream ss;
      ss << in.rdbuf();
      auto g = ws::load_policy(ss.str());
      std::string id = entry.path().stem().string();
      auto s = std::make_shared<Session>(id, obl::from_policy(g));
      std::lock_guard lock(mu_);
      sessions_[id] = s;
      bump_past(id);
      ++n;
    }
    return n;
  }

 private:
  std::string fresh_id() {
    std::lock_guard lock(mu_);
    std::string id;
    do id = "s" + std::to_string(++counter_);
    while (sessions_.count(id));
    return id;
  }

  void bump_past(const std::string& id) {
    if (id.size() > 1 && id[0] == 's' && id.find_first_not_of("0123456789", 1) == std::string::npos)
      counter_ = std::max<std::size_t>(counter_, std::stoull(id.substr(1)));
  }

  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::size_t counter_ = 0;
};

}  // namespace cbaco::svc
