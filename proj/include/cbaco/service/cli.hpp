#pragma once

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cbaco/service/http.hpp"

namespace cbaco::svc {

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline obl::SimulationState simulate_log(const policy::PolicyGraph& g, const std::string& log) {
  auto s = obl::from_policy(g);
  if (log.empty()) return s;
  for (const auto& e : ws::parse_event_log(read_file(log))) s = obl::inject_event(s, e);
  return s;
}

// Failures that are findings about the input rather than misuse exit with 1.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NotWellFormed*>(&e) || dynamic_cast<const BudgetExceeded*>(&e)) return 1;
  return 2;
}

inline Service* running_service = nullptr;

extern "C" inline void stop_running_service(int) {
  if (running_service) running_service->stop();
}

}  // namespace detail

// Runs the cbaco command line. Exit codes: 0 success, 1 violations or a
// deny found, 2 usage or parse errors.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Category-based access control with obligations, as port graphs", "cbaco"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output and errors");

  std::string policy_path, events_path, strategy_path, format = "json", view, principal, state;
  std::string p, a, r;
  std::optional<std::uint64_t> seed;
  std::size_t budget = strat::EvalOptions{}.step_budget;
  std::string out_path;
  ServiceConfig serve_cfg = ServiceConfig::from_env();
  std::string persist;

  auto* validate = app.add_subcommand("validate", "Check a policy file for well-formedness");
  validate->add_option("policy", policy_path)->required();

  auto* query = app.add_subcommand("query", "Authorization decision for one request");
  query->add_option("policy", policy_path)->required();
  query->add_option("--p", p, "Principal")->required();
  query->add_option("--a", a, "Action")->required();
  query->add_option("--r", r, "Resource")->required();

  auto* duties = app.add_subcommand("duties", "Duty states after replaying an event log");
  duties->add_option("policy", policy_path)->required();
  duties->add_option("--events", events_path, "Event log (JSON lines)");
  duties->add_option("--principal", principal);
  duties->add_option("--state", state, "pending, fulfilled or violated");

  auto* simulate = app.add_subcommand("simulate", "Replay events, then run a strategy");
  simulate->add_option("policy", policy_path)->required();
  simulate->add_option("--events", events_path, "Event log (JSON lines)");
  simulate->add_option("--strategy", strategy_path, "Strategy script");
  simulate->add_option("--seed", seed, "Seeded random choice for one()");
  simulate->add_option("--budget", budget, "Step budget");
  simulate->add_option("--out", out_path, "Write the resulting policy file here");

  auto* exp = app.add_subcommand("export", "Render a policy as DOT or JSON");
  exp->add_option("policy", policy_path)->required();
  exp->add_option("--format", format)->check(CLI::IsMember({"dot", "json"}));
  exp->add_option("--view", view, "Hide kinds, edge types or attribute matches, e.g. \"E,PrR\"");

  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  serve->add_option("--host", serve_cfg.host);
  serve->add_option("--port", serve_cfg.port);
  serve->add_option("--persist", persist, "Directory for session snapshots");

  std::vector<const char*> argv{"cbaco"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) {
      auto vs = policy::validate(ws::load_policy(detail::read_file(policy_path)));
      if (as_json)
        out << json{{"well_formed", vs.empty()}, {"violations", violations_json(vs)}}.dump(2) << "\n";
      else if (vs.empty())
        out << "well-formed\n";
      else
        for (const auto& v : vs) out << v.code << ": " << v.message << "\n";
      return vs.empty() ? 0 : 1;
    }

    if (*query) {
      auto d = policy::decide(ws::load_policy(detail::read_file(policy_path)), p, a, r);
      if (as_json) {
        out << decision_json(d).dump(2) << "\n";
      } else {
        out << policy::to_string(d.verdict) << "\n";
        if (!d.names.empty()) {
          out << "path:";
          for (std::size_t i = 0; i < d.names.size(); ++i) out << (i ? " -> " : " ") << d.names[i];
          out << "\n";
        }
      }
      return d.verdict == policy::Verdict::deny ? 1 : 0;
    }

    if (*duties) {
      std::optional<obl::DutyTag> tag;
      if (!state.empty()) {
        tag = obl::tag_from_string(state);
        if (!tag) throw ParseError("unknown duty state " + state);
      }
      auto s = detail::simulate_log(ws::load_policy(detail::read_file(policy_path)), events_path);
      auto report = ws::query_duties(s, principal.empty() ? std::nullopt : std::optional(principal), tag);
      if (as_json) {
        out << ws::to_json(report).dump(2) << "\n";
      } else {
        for (const auto& e : report) {
          out << obl::to_string(e.state.tag) << "\t" << e.duty.principal << "\t" << e.duty.action << "\t"
              << e.duty.resource << "\tstart=" << e.duty.start_event.value_or("-")
              << "\tend=" << e.duty.end_event.value_or("-");
          if (e.state.fulfilling_event) out << "\tfulfilled_by=" << e.state.fulfilling_event->id;
          out << "\n";
        }
        if (report.empty()) out << "no duties\n";
      }
      return 0;
    }

    if (*simulate) {
      auto g = ws::load_policy(detail::read_file(policy_path));
      require_well_formed(g);
      Session session("cli", detail::simulate_log(g, events_path));
      json result = session.summary();
      if (!strategy_path.empty()) {
        strat::EvalOptions opts;
        opts.seed = seed;
        opts.step_budget = budget;
        result["strategy"] = session.run_strategy(detail::read_file(strategy_path), opts);
      }
      result["duties"] = ws::to_json(ws::query_duties(session.sim));
      if (!out_path.empty()) {
        std::ofstream f(out_path);
        f << ws::save_policy(session.sim.graph);
      }
      if (as_json) {
        out << result.dump(2) << "\n";
      } else {
        out << "events: " << result["history"].size() << "\n";
        if (result.contains("strategy"))
          out << "strategy: " << (result["strategy"]["success"].get<bool>() ? "success" : "failure") << ", "
              << result["strategy"]["applications"] << " rule applications, "
              << result["strategy"]["derivation"].size() << " derivation nodes\n";
        out << "duties: " << result["duties"].size() << "\n";
      }
      bool ok = !result.contains("strategy") || result["strategy"]["success"].get<bool>();
      return ok ? 0 : 1;
    }

    if (*exp) {
      auto g = ws::load_policy(detail::read_file(policy_path));
      auto f = view.empty() ? ws::ViewFilter{} : ws::ViewFilter::parse(view);
      out << (format == "dot" ? ws::export_dot(g, f) : ws::export_json(g, f).dump(2) + "\n");
      return 0;
    }

    if (*serve) {
      if (!persist.empty()) serve_cfg.persist_dir = persist;
      Service service(serve_cfg);
      if (service.bind() < 0) throw ParseError("cannot bind " + serve_cfg.host + ":" + std::to_string(serve_cfg.port));
      err << "listening on " << serve_cfg.host << ":" << service.port() << "\n";
      detail::running_service = &service;
      std::signal(SIGINT, detail::stop_running_service);
      std::signal(SIGTERM, detail::stop_running_service);
      bool ok = service.serve();
      detail::running_service = nullptr;
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    if (as_json)
      err << error_json(e).dump() << "\n";
    else
      err << "error: " << error_name(e) << ": " << e.what() << "\n";
    return detail::exit_code_for(e);
  }
  return 2;
}

}  // namespace cbaco::svc
