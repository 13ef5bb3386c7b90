#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cbaco/error.hpp"
#include "cbaco/portgraph/value.hpp"

namespace cbaco::obl {

using pg::Bindings;
using pg::Record;
using pg::Value;

// A ground event. `spec` holds subj, act, obj and time plus any extra fields.
struct Event {
  std::string id;
  Record spec;

  const Value& field(const std::string& key) const {
    static const Value bottom;
    auto it = spec.find(key);
    return it == spec.end() ? bottom : it->second;
  }
  std::string subj() const { return field("subj").is_string() ? field("subj").as_string() : ""; }
  std::string act() const { return field("act").is_string() ? field("act").as_string() : ""; }
  std::string obj() const { return field("obj").is_string() ? field("obj").as_string() : ""; }
  std::int64_t time() const { return field("time").is_int() ? field("time").as_int() : 0; }

  bool operator==(const Event&) const = default;
};

// ge[X1..Xn]: a record pattern whose fields may hold variables.
struct EventScheme {
  std::string name;
  std::vector<std::string> vars;
  Record pattern;

  bool operator==(const EventScheme&) const = default;
};

inline void check_event(const Event& e) {
  if (e.id.empty()) throw ParseError("event without id");
  for (const char* k : {"subj", "act", "obj"})
    if (!e.field(k).is_string())
      throw ParseError("event " + e.id + ": field " + k + " must be a string");
  if (!e.field("time").is_int()) throw ParseError("event " + e.id + ": time must be an integer");
  for (const auto& [k, v] : e.spec)
    if (!v.is_ground()) throw ParseError("event " + e.id + ": field " + k + " is not ground");
}

inline void check_scheme(const EventScheme& s) {
  std::set<std::string> used;
  for (const auto& [k, v] : s.pattern) pg::collect_vars(v, used);
  for (const auto& v : used)
    if (std::find(s.vars.begin(), s.vars.end(), v) == s.vars.end())
      throw ParseError("scheme " + s.name + ": variable " + v + " is not declared");
}

// Bindings of the scheme's variables if the event instantiates it. Fields the
// pattern does not mention are unconstrained.
inline std::optional<Bindings> event_matches_scheme(const Event& e, const EventScheme& ge) {
  Bindings b;
  if (!pg::unify(ge.pattern, e.spec, b)) return std::nullopt;
  return b;
}

// Records travel in node attributes as a tuple of (key, value) pairs.
inline Value record_value(const Record& r) {
  Value::Tuple out;
  for (const auto& [k, v] : r) out.push_back(Value::tuple({k, v}));
  return Value(std::move(out));
}

inline Record value_record(const Value& v) {
  Record out;
  if (!v.is_tuple()) return out;
  for (const auto& kv : v.as_tuple())
    if (kv.is_tuple() && kv.as_tuple().size() == 2 && kv.as_tuple()[0].is_string())
      out.emplace(kv.as_tuple()[0].as_string(), kv.as_tuple()[1]);
  return out;
}

inline Value names_value(const std::vector<std::string>& names) {
  Value::Tuple out(names.begin(), names.end());
  return Value(std::move(out));
}

inline std::vector<std::string> value_names(const Value& v) {
  std::vector<std::string> out;
  if (v.is_tuple())
    for (const auto& x : v.as_tuple())
      if (x.is_string()) out.push_back(x.as_string());
  return out;
}

}  // namespace cbaco::obl
