#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cbaco/obligation/simulation.hpp"
#include "cbaco/portgraph/io.hpp"

namespace cbaco::ws {

using json = nlohmann::json;
using policy::Id;
using policy::Kind;
using policy::PolicyGraph;
using pg::Value;

namespace detail {

inline std::string str_of(const json& j, const char* what) {
  if (!j.is_string()) throw ParseError(std::string(what) + " must be a string, got " + j.dump());
  return j.get<std::string>();
}

inline std::optional<std::string> opt_str_of(const json& j, const char* what) {
  if (j.is_null()) return std::nullopt;
  return str_of(j, what);
}

inline const json& list(const json& doc, const char* key) {
  static const json empty = json::array();
  if (!doc.contains(key)) return empty;
  const json& v = doc.at(key);
  if (!v.is_array()) throw ParseError(std::string("'") + key + "' must be an array");
  return v;
}

inline const json& tuple(const json& j, std::size_t n, const char* key) {
  if (!j.is_array() || j.size() != n)
    throw ParseError(std::string("each '") + key + "' entry must be an array of " +
                     std::to_string(n) + ", got " + j.dump());
  return j;
}

class Builder {
 public:
  PolicyGraph g;

  Id entity(Kind k, const std::string& name, const char* what) {
    auto it = names_.find({k, name});
    if (it == names_.end()) throw TypeError(std::string("unknown ") + what, name);
    return it->second;
  }

  Id declare(Kind k, const std::string& name, const char* what, pg::Record extra = {}) {
    if (names_.count({k, name})) throw TypeError(std::string("duplicate ") + what, name);
    Id n = policy::add_entity(g, k, Value(name), std::move(extra));
    names_[{k, name}] = n;
    return n;
  }

  Id permission(const std::string& a, const std::string& r) {
    Value ent = Value::tuple({a, r});
    if (auto it = compound_.find(ent); it != compound_.end()) return it->second;
    Id an = entity(Kind::A, a, "action");
    Id rn = entity(Kind::R, r, "resource");
    Id pr = policy::add_entity(g, Kind::Pr, ent);
    policy::connect(g, pr, an);
    policy::connect(g, pr, rn);
    compound_[ent] = pr;
    return pr;
  }

  Id obligation(const policy::Obligation& o) {
    Value ent = o.ent();
    if (auto it = compound_.find(ent); it != compound_.end()) return it->second;
    Id pr = permission(o.action, o.resource);
    Id on = policy::add_entity(g, Kind::O, ent);
    policy::connect(g, on, pr);
    if (o.start_scheme)
      policy::connect(g, on, entity(Kind::G, *o.start_scheme, "scheme"), {{"ge", Value("i")}});
    if (o.end_scheme)
      policy::connect(g, on, entity(Kind::G, *o.end_scheme, "scheme"), {{"ge", Value("f")}});
    compound_[ent] = on;
    return on;
  }

 private:
  std::map<std::pair<Kind, std::string>, Id> names_;
  std::map<Value, Id> compound_;
};

inline obl::Event event_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("event must be an object, got " + j.dump());
  obl::Event e;
  for (const auto& [k, v] : j.items()) {
    if (k == "id")
      e.id = str_of(v, "event id");
    else
      e.spec.emplace(k, pg::value_from_json(v));
  }
  obl::check_event(e);
  return e;
}

}  // namespace detail

inline obl::Event parse_event(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("event is not valid JSON: " + std::string(text));
  return detail::event_from_json(j);
}

inline json event_to_json(const obl::Event& e) {
  json j = pg::to_json(e.spec);
  j["id"] = e.id;
  return j;
}

// One JSON event per non-empty line.
inline std::vector<obl::Event> parse_event_log(std::string_view text) {
  std::vector<obl::Event> out;
  std::size_t line_no = 0, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back(parse_event(line));
      } catch (const ParseError& e) {
        throw ParseError("event log line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    start = end + 1;
  }
  return out;
}

// Builds the policy graph described by a policy document. Permission and
// obligation nodes are synthesised from the relations that mention them;
// event links (EG, EP, EA, ER) are derived from the event records.
inline PolicyGraph load_policy_json(const json& doc) {
  using detail::list;
  using detail::str_of;
  using detail::tuple;
  if (!doc.is_object()) throw ParseError("policy document must be a JSON object");
  detail::Builder b;
  for (const auto& x : list(doc, "principals")) b.declare(Kind::P, str_of(x, "principal"), "principal");
  for (const auto& x : list(doc, "categories")) b.declare(Kind::C, str_of(x, "category"), "category");
  for (const auto& x : list(doc, "actions")) b.declare(Kind::A, str_of(x, "action"), "action");
  for (const auto& x : list(doc, "resources")) b.declare(Kind::R, str_of(x, "resource"), "resource");
  for (const auto& x : list(doc, "schemes")) {
    if (!x.is_object()) throw ParseError("scheme must be an object, got " + x.dump());
    obl::EventScheme s;
    s.name = str_of(x.value("name", json()), "scheme name");
    for (const auto& v : x.value("vars", json::array())) s.vars.push_back(str_of(v, "scheme variable"));
    s.pattern = pg::record_from_json(x.value("pattern", json::object()));
    obl::check_scheme(s);
    b.declare(Kind::G, s.name, "scheme",
              {{"spec", obl::record_value(s.pattern)}, {"vars", obl::names_value(s.vars)}});
  }
  for (const auto& x : list(doc, "gg")) {
    tuple(x, 2, "gg");
    std::string general = str_of(x[1], "scheme");
    policy::connect(b.g, b.entity(Kind::G, str_of(x[0], "scheme"), "scheme"),
                    b.entity(Kind::G, general, "scheme"), {{"target", Value(general)}});
  }

  std::vector<Id> events;
  for (const auto& x : list(doc, "events")) {
    obl::Event e = detail::event_from_json(x);
    events.push_back(b.declare(Kind::E, e.id, "event",
                               {{"now", Value(false)}, {"spec", obl::record_value(e.spec)}}));
  }
  for (const auto& h : list(doc, "histories")) {
    if (!h.is_array()) throw ParseError("history must be an array of event ids");
    for (std::size_t i = 1; i < h.size(); ++i) {
      std::string later = str_of(h[i], "event id");
      policy::connect(b.g, b.entity(Kind::E, str_of(h[i - 1], "event id"), "event"),
                      b.entity(Kind::E, later, "event"), {{"target", Value(later)}});
    }
  }
  if (doc.contains("now") && !doc.at("now").is_null())
    b.g.set_attr(b.entity(Kind::E, str_of(doc.at("now"), "now"), "event"), "now", Value(true));
  for (Id e : events) obl::link_event(b.g, e);

  for (const auto& x : list(doc, "pca")) {
    tuple(x, 2, "pca");
    policy::connect(b.g, b.entity(Kind::P, str_of(x[0], "principal"), "principal"),
                    b.entity(Kind::C, str_of(x[1], "category"), "category"),
                    {{"aux", Value(false)}});
  }
  std::map<std::pair<std::string, std::string>, std::pair<bool, bool>> cc;
  std::vector<std::pair<std::string, std::string>> cc_order;
  for (const char* key : {"cc_auth", "cc_obl"})
    for (const auto& x : list(doc, key)) {
      tuple(x, 2, key);
      std::pair<std::string, std::string> k{str_of(x[0], "category"), str_of(x[1], "category")};
      if (!cc.count(k)) cc_order.push_back(k);
      (std::string(key) == "cc_auth" ? cc[k].first : cc[k].second) = true;
    }
  for (const auto& k : cc_order) {
    auto [auth, obl] = cc[k];
    policy::connect(b.g, b.entity(Kind::C, k.first, "category"),
                    b.entity(Kind::C, k.second, "category"),
                    {{"target", Value::tuple({k.second})}, {"auth", Value(auth)}, {"obl", Value(obl)}});
  }
  for (const char* key : {"arca", "barca"})
    for (const auto& x : list(doc, key)) {
      tuple(x, 3, key);
      Id pr = b.permission(str_of(x[0], "action"), str_of(x[1], "resource"));
      policy::connect(b.g, b.entity(Kind::C, str_of(x[2], "category"), "category"), pr,
                      {{"auth", Value(std::string(key) == "arca" ? "A" : "B")}});
    }
  for (const auto& x : list(doc, "oca")) {
    tuple(x, 5, "oca");
    policy::Obligation o{str_of(x[0], "action"), str_of(x[1], "resource"),
                         detail::opt_str_of(x[2], "scheme"), detail::opt_str_of(x[3], "scheme")};
    policy::connect(b.g, b.entity(Kind::C, str_of(x[4], "category"), "category"), b.obligation(o));
  }
  for (const auto& x : list(doc, "duties")) {
    if (!x.is_object()) throw ParseError("duty must be an object, got " + x.dump());
    policy::Duty d{str_of(x.value("principal", json()), "principal"),
                   str_of(x.value("action", json()), "action"),
                   str_of(x.value("resource", json()), "resource"),
                   detail::opt_str_of(x.value("start", json()), "event"),
                   detail::opt_str_of(x.value("end", json()), "event")};
    pg::Record extra{{"state", Value(x.value("state", std::string("pending")))}};
    if (x.contains("origin")) {
      const json& o = tuple(x.at("origin"), 4, "origin");
      extra["origin"] = policy::Obligation{str_of(o[0], "action"), str_of(o[1], "resource"),
                                           detail::opt_str_of(o[2], "scheme"),
                                           detail::opt_str_of(o[3], "scheme")}
                            .ent();
    }
    Id dn = policy::add_entity(b.g, Kind::D, d.ent(), std::move(extra));
    policy::connect(b.g, dn, b.entity(Kind::P, d.principal, "principal"));
    policy::connect(b.g, dn, b.permission(d.action, d.resource));
    if (d.start_event)
      policy::connect(b.g, dn, b.entity(Kind::E, *d.start_event, "event"), {{"ev", Value("i")}});
    if (d.end_event)
      policy::connect(b.g, dn, b.entity(Kind::E, *d.end_event, "event"), {{"ev", Value("f")}});
  }
  return b.g;
}

inline PolicyGraph load_policy(std::string_view bytes) {
  json doc = json::parse(bytes, nullptr, false);
  if (doc.is_discarded()) throw ParseError("policy file is not valid JSON");
  return load_policy_json(doc);
}

// Inverse of load_policy_json. Auxiliary edges and the edges the loader
// derives (EG, EP, EA, ER, PrA, PrR, OPr, OG) are not written.
inline json save_policy_json(const PolicyGraph& g) {
  policy::PolicyIndex idx(g);
  auto names = [&](Kind k) {
    std::vector<std::string> out;
    for (Id n : idx.nodes_of(k)) out.push_back(idx.ent(n).str());
    std::sort(out.begin(), out.end());
    return out;
  };
  auto opt = [](const Value& v) { return v.is_string() ? json(v.as_string()) : json(nullptr); };
  json doc = json::object();
  doc["principals"] = names(Kind::P);
  doc["categories"] = names(Kind::C);
  doc["actions"] = names(Kind::A);
  doc["resources"] = names(Kind::R);

  std::vector<std::pair<std::string, json>> schemes;
  for (Id n : idx.nodes_of(Kind::G)) {
    auto s = obl::scheme_of(g, n);
    schemes.push_back({s.name, {{"name", s.name}, {"vars", s.vars}, {"pattern", pg::to_json(s.pattern)}}});
  }
  std::sort(schemes.begin(), schemes.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  doc["schemes"] = json::array();
  for (auto& [n, j] : schemes) doc["schemes"].push_back(std::move(j));

  std::vector<std::pair<std::string, json>> events;
  doc["now"] = nullptr;
  for (Id n : idx.nodes_of(Kind::E)) {
    auto e = obl::event_of(g, n);
    events.push_back({e.id, event_to_json(e)});
    const Value* now = pg::find_attr(g.node(n).attrs, "now");
    if (now && now->is_bool() && now->as_bool()) doc["now"] = e.id;
  }
  std::sort(events.begin(), events.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  doc["events"] = json::array();
  for (auto& [n, j] : events) doc["events"].push_back(std::move(j));

  std::set<std::vector<std::string>> histories;
  for (const auto& chain : policy::detail::event_chains(idx)) {
    if (chain.size() < 2) continue;
    std::vector<std::string> h;
    for (Id n : chain) h.push_back(idx.ent(n).str());
    histories.insert(h);
  }
  doc["histories"] = json::array();
  for (const auto& h : histories) doc["histories"].push_back(h);

  std::set<std::vector<std::string>> pca, arca, barca, cc_auth, cc_obl, gg;
  std::set<json> oca;
  for (Id e : idx.edges()) {
    auto [x, y] = idx.ends(e);
    if (idx.kind(x) > idx.kind(y)) std::swap(x, y);
    std::string t = idx.type(e);
    std::string xs = idx.ent(x).str(), ys = idx.ent(y).str();
    if (t == "PC") {
      pca.insert({xs, ys});
    } else if (t == "CC") {
      bool y_up = idx.targets(e, y);
      std::vector<std::string> pair = y_up ? std::vector{xs, ys} : std::vector{ys, xs};
      if (idx.flag(e, "auth")) cc_auth.insert(pair);
      if (idx.flag(e, "obl")) cc_obl.insert(pair);
    } else if (t == "CPr") {
      const auto& ar = idx.ent(y).as_tuple();
      (idx.text(e, "auth") == "A" ? arca : barca).insert({ar[0].str(), ar[1].str(), xs});
    } else if (t == "CO") {
      const auto& o = idx.ent(y).as_tuple();
      oca.insert(json::array({o[0].str(), o[1].str(), opt(o[2]), opt(o[3]), xs}));
    } else if (t == "GG") {
      bool y_up = idx.targets(e, y);
      gg.insert(y_up ? std::vector{xs, ys} : std::vector{ys, xs});
    }
  }
  doc["pca"] = pca;
  doc["arca"] = arca;
  doc["barca"] = barca;
  doc["oca"] = oca;
  doc["cc_auth"] = cc_auth;
  doc["cc_obl"] = cc_obl;
  doc["gg"] = gg;

  std::vector<json> duties;
  for (Id n : idx.nodes_of(Kind::D)) {
    const auto& t = idx.ent(n).as_tuple();
    json d = {{"principal", t[0].str()}, {"action", t[1].str()}, {"resource", t[2].str()},
              {"start", opt(t[3])}, {"end", opt(t[4])}};
    const auto& attrs = g.node(n).attrs;
    if (const Value* s = pg::find_attr(attrs, "state"); s && s->is_string()) d["state"] = s->as_string();
    if (const Value* o = pg::find_attr(attrs, "origin"); o && o->is_tuple()) {
      const auto& ot = o->as_tuple();
      d["origin"] = json::array({ot[0].str(), ot[1].str(), opt(ot[2]), opt(ot[3])});
    }
    duties.push_back(std::move(d));
  }
  std::sort(duties.begin(), duties.end(),
            [](const json& a, const json& b) { return a.dump() < b.dump(); });
  if (!duties.empty()) doc["duties"] = duties;
  return doc;
}

inline std::string save_policy(const PolicyGraph& g) { return save_policy_json(g).dump(2) + "\n"; }

}  // namespace cbaco::ws
