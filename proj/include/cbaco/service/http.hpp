#pragma once

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "httplib.h"

#include "cbaco/service/session.hpp"

namespace cbaco::svc {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::optional<std::filesystem::path> persist_dir;

  // CBACO_HOST and CBACO_PORT override the defaults.
  static ServiceConfig from_env() {
    ServiceConfig c;
    if (const char* h = std::getenv("CBACO_HOST"); h && *h) c.host = h;
    if (const char* p = std::getenv("CBACO_PORT"); p && *p) c.port = std::atoi(p);
    return c;
  }
};

// 400 for bad input, 409 for requests the current state rejects.
inline int status_for(const std::exception& e) {
  if (dynamic_cast<const NotWellFormed*>(&e) || dynamic_cast<const TimeRegression*>(&e) ||
      dynamic_cast<const HistoryConflict*>(&e) || dynamic_cast<const DuplicateEvent*>(&e) ||
      dynamic_cast<const BudgetExceeded*>(&e))
    return 409;
  return 400;
}

class Service {
 public:
  explicit Service(ServiceConfig cfg = {}) : cfg_(std::move(cfg)) {
    if (cfg_.persist_dir) store_.load(*cfg_.persist_dir);
    routes();
  }

  ~Service() { stop(); }

  SessionStore& store() { return store_; }
  httplib::Server& server() { return server_; }

  // Binds and returns the port, without serving yet.
  int bind() {
    if (cfg_.port == 0) return port_ = server_.bind_to_any_port(cfg_.host);
    if (!server_.bind_to_port(cfg_.host, cfg_.port)) return port_ = -1;
    return port_ = cfg_.port;
  }

  // Serves until stop(); call bind() first.
  bool serve() {
    bool ok = server_.listen_after_bind();
    if (cfg_.persist_dir) store_.save(*cfg_.persist_dir);
    return ok;
  }

  void stop() {
    if (server_.is_running()) server_.stop();
  }

  int port() const { return port_; }

 private:
  using Req = httplib::Request;
  using Res = httplib::Response;

  static void reply(Res& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  // Runs `f` against the named session, mapping errors to status codes.
  void with_session(const Req& req, Res& res, bool write,
                    const std::function<json(Session&)>& f) {
    auto s = store_.get(req.path_params.at("id"));
    if (!s) return reply(res, 404, {{"error", "UnknownSession"}, {"message", "no session " + req.path_params.at("id")}});
    try {
      json body;
      if (write) {
        std::unique_lock lock(s->mu);
        body = f(*s);
      } else {
        std::shared_lock lock(s->mu);
        body = f(*s);
      }
      reply(res, 200, body);
    } catch (const Error& e) {
      reply(res, status_for(e), error_json(e));
    } catch (const nlohmann::json::exception& e) {
      reply(res, 400, {{"error", "ParseError"}, {"message", e.what()}});
    }
  }

  static std::optional<std::string> param(const Req& req, const char* key) {
    if (!req.has_param(key)) return std::nullopt;
    return req.get_param_value(key);
  }

  static ws::ViewFilter view_of(const Req& req) {
    auto v = param(req, "view");
    return v ? ws::ViewFilter::parse(*v) : ws::ViewFilter{};
  }

  static std::vector<obl::Event> events_of(const std::string& body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) return ws::parse_event_log(body);  // JSON lines
    std::vector<obl::Event> out;
    if (j.is_array())
      for (const auto& e : j) out.push_back(ws::detail::event_from_json(e));
    else
      out.push_back(ws::detail::event_from_json(j));
    return out;
  }

  void routes() {
    server_.Post("/sessions", [this](const Req& req, Res& res) {
      try {
        auto s = store_.create(ws::load_policy(req.body));
        std::shared_lock lock(s->mu);
        reply(res, 201, s->summary());
      } catch (const Error& e) {
        reply(res, status_for(e), error_json(e));
      }
    });
    server_.Get("/sessions", [this](const Req&, Res& res) {
      reply(res, 200, {{"sessions", store_.ids()}});
    });
    server_.Get("/sessions/:id", [this](const Req& req, Res& res) {
      with_session(req, res, false, [](Session& s) { return s.summary(); });
    });
    server_.Get("/sessions/:id/graph", [this](const Req& req, Res& res) {
      with_session(req, res, false, [&](Session& s) { return s.graph(view_of(req)); });
    });
    server_.Get("/sessions/:id/export", [this](const Req& req, Res& res) {
      with_session(req, res, false, [&](Session& s) {
        return json{{"format", param(req, "format").value_or("json")},
                    {"content", s.export_text(param(req, "format").value_or("json"), view_of(req))}};
      });
    });
    server_.Post("/sessions/:id/events", [this](const Req& req, Res& res) {
      with_session(req, res, true, [&](Session& s) { return s.inject(events_of(req.body)); });
    });
    server_.Post("/sessions/:id/strategy", [this](const Req& req, Res& res) {
      with_session(req, res, true, [&](Session& s) {
        json j = json::parse(req.body, nullptr, false);
        strat::EvalOptions opts;
        std::string text = req.body;
        if (!j.is_discarded() && j.is_object()) {
          text = j.at("strategy").get<std::string>();
          if (j.contains("seed")) opts.seed = j["seed"].get<std::uint64_t>();
          if (j.contains("budget")) opts.step_budget = j["budget"].get<std::size_t>();
        }
        return s.run_strategy(text, opts);
      });
    });
    server_.Get("/sessions/:id/derivation", [this](const Req& req, Res& res) {
      with_session(req, res, false, [&](Session& s) {
        return json{{"current", s.current}, {"nodes", s.tree.to_json(param(req, "graphs").has_value())}};
      });
    });
    server_.Get("/sessions/:id/decide", [this](const Req& req, Res& res) {
      with_session(req, res, false, [&](Session& s) {
        auto p = param(req, "p"), a = param(req, "a"), r = param(req, "r");
        if (!p || !a || !r) throw ParseError("decide needs the query parameters p, a and r");
        return s.decide(*p, *a, *r);
      });
    });
    server_.Get("/sessions/:id/duties", [this](const Req& req, Res& res) {
      with_session(req, res, false, [&](Session& s) {
        std::optional<obl::DutyTag> tag;
        if (auto st = param(req, "state")) {
          tag = obl::tag_from_string(*st);
          if (!tag) throw ParseError("unknown duty state " + *st);
        }
        return s.duties(param(req, "principal"), tag);
      });
    });
    server_.Post("/sessions/:id/fork", [this](const Req& req, Res& res) {
      auto parent = store_.get(req.path_params.at("id"));
      if (!parent) return reply(res, 404, {{"error", "UnknownSession"}, {"message", "no session " + req.path_params.at("id")}});
      auto child = store_.fork(*parent);
      std::shared_lock lock(child->mu);
      json body = child->summary();
      body["parent"] = parent->id;
      reply(res, 201, body);
    });
    server_.Delete("/sessions/:id", [this](const Req& req, Res& res) {
      if (!store_.erase(req.path_params.at("id")))
        return reply(res, 404, {{"error", "UnknownSession"}, {"message", "no session " + req.path_params.at("id")}});
      reply(res, 200, {{"deleted", req.path_params.at("id")}});
    });
  }

  ServiceConfig cfg_;
  SessionStore store_;
  httplib::Server server_;
  int port_ = -1;
};

}  // namespace cbaco::svc
