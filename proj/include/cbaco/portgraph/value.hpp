#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cbaco::pg {

// The absent value. Used for missing event schemes and events.
struct Bottom {
  bool operator==(const Bottom&) const = default;
};

// A value-variable occurring in a rule record. Binds on first occurrence.
struct Var {
  std::string name;
  bool operator==(const Var&) const = default;
};

// Ground values are strings, integers, booleans and tuples; Bottom and Var are
// the two non-ground extras.
class Value {
 public:
  using Tuple = std::vector<Value>;

  Value() : data_(Bottom{}) {}
  Value(Bottom b) : data_(b) {}
  Value(bool b) : data_(b) {}
  Value(int i) : data_(static_cast<std::int64_t>(i)) {}
  Value(std::int64_t i) : data_(i) {}
  Value(const char* s) : data_(std::string(s)) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(Tuple t) : data_(std::move(t)) {}
  Value(Var v) : data_(std::move(v)) {}

  static Value var(std::string name) { return Value(Var{std::move(name)}); }
  static Value tuple(std::initializer_list<Value> items) {
    return Value(Tuple(items));
  }

  bool is_bottom() const { return std::holds_alternative<Bottom>(data_); }
  bool is_bool() const { return std::holds_alternative<bool>(data_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
  bool is_string() const { return std::holds_alternative<std::string>(data_); }
  bool is_tuple() const { return std::holds_alternative<Tuple>(data_); }
  bool is_var() const { return std::holds_alternative<Var>(data_); }

  bool as_bool() const { return std::get<bool>(data_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  const std::string& as_string() const { return std::get<std::string>(data_); }
  const Tuple& as_tuple() const { return std::get<Tuple>(data_); }
  const Var& as_var() const { return std::get<Var>(data_); }

  bool is_ground() const {
    if (is_var()) return false;
    if (is_tuple()) {
      for (const auto& v : as_tuple())
        if (!v.is_ground()) return false;
    }
    return true;
  }

  std::size_t index() const { return data_.index(); }

  friend int compare(const Value& a, const Value& b);
  friend bool operator==(const Value& a, const Value& b) {
    return compare(a, b) == 0;
  }
  friend bool operator<(const Value& a, const Value& b) {
    return compare(a, b) < 0;
  }

  // Human readable rendering: strings unquoted, tuples parenthesised.
  std::string str() const {
    std::ostringstream os;
    write(os, false);
    return os.str();
  }

  // Unambiguous rendering, used for canonical forms and digests.
  std::string repr() const {
    std::ostringstream os;
    write(os, true);
    return os.str();
  }

 private:
  void write(std::ostream& os, bool quoted) const {
    switch (data_.index()) {
      case 0:
        os << (quoted ? "#bot" : "\xE2\x8A\xA5");
        break;
      case 1:
        os << (as_bool() ? "true" : "false");
        break;
      case 2:
        os << as_int();
        break;
      case 3:
        if (quoted) {
          os << '"';
          for (char c : as_string()) {
            if (c == '"' || c == '\\') os << '\\';
            os << c;
          }
          os << '"';
        } else {
          os << as_string();
        }
        break;
      case 4: {
        os << '(';
        bool first = true;
        for (const auto& v : as_tuple()) {
          if (!first) os << ", ";
          first = false;
          v.write(os, quoted);
        }
        os << ')';
        break;
      }
      case 5:
        os << '?' << as_var().name;
        break;
    }
  }

  std::variant<Bottom, bool, std::int64_t, std::string, Tuple, Var> data_;
};

inline int compare(const Value& a, const Value& b) {
  if (a.data_.index() != b.data_.index())
    return a.data_.index() < b.data_.index() ? -1 : 1;
  switch (a.data_.index()) {
    case 0:
      return 0;
    case 1:
      return a.as_bool() == b.as_bool() ? 0 : (a.as_bool() ? 1 : -1);
    case 2:
      return a.as_int() == b.as_int() ? 0 : (a.as_int() < b.as_int() ? -1 : 1);
    case 3:
      return a.as_string().compare(b.as_string()) < 0
                 ? -1
                 : (a.as_string() == b.as_string() ? 0 : 1);
    case 4: {
      const auto& x = a.as_tuple();
      const auto& y = b.as_tuple();
      for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        int c = compare(x[i], y[i]);
        if (c != 0) return c;
      }
      if (x.size() == y.size()) return 0;
      return x.size() < y.size() ? -1 : 1;
    }
    default:
      return a.as_var().name.compare(b.as_var().name) < 0
                 ? -1
                 : (a.as_var().name == b.as_var().name ? 0 : 1);
  }
}

// A record maps attribute names to values. Keys starting with '?' are
// attribute variables.
using Record = std::map<std::string, Value>;

// Value-variable bindings produced by matching.
using Bindings = std::map<std::string, Value>;

inline bool is_attribute_variable(const std::string& key) {
  return !key.empty() && key.front() == '?';
}

inline std::string record_repr(const Record& r) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : r) {
    if (!first) out += ", ";
    first = false;
    out += k;
    out += '=';
    out += v.repr();
  }
  out += '}';
  return out;
}

// Unify a (possibly non-ground) pattern against a ground value, extending the
// bindings. Bindings are left unspecified on failure; callers copy first.
inline bool unify(const Value& pattern, const Value& ground, Bindings& b) {
  if (pattern.is_var()) {
    auto it = b.find(pattern.as_var().name);
    if (it != b.end()) return it->second == ground;
    b.emplace(pattern.as_var().name, ground);
    return true;
  }
  if (pattern.is_tuple()) {
    if (!ground.is_tuple()) return false;
    const auto& p = pattern.as_tuple();
    const auto& g = ground.as_tuple();
    if (p.size() != g.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (!unify(p[i], g[i], b)) return false;
    return true;
  }
  return pattern == ground;
}

// Every entry of the pattern record must be present in the host record and
// unify with it. Extra host entries are allowed.
inline bool unify(const Record& pattern, const Record& host, Bindings& b) {
  for (const auto& [k, v] : pattern) {
    auto it = host.find(k);
    if (it == host.end()) return false;
    if (!unify(v, it->second, b)) return false;
  }
  return true;
}

inline std::optional<Value> substitute(const Value& v, const Bindings& b) {
  if (v.is_var()) {
    auto it = b.find(v.as_var().name);
    if (it == b.end()) return std::nullopt;
    return it->second;
  }
  if (v.is_tuple()) {
    Value::Tuple out;
    for (const auto& x : v.as_tuple()) {
      auto s = substitute(x, b);
      if (!s) return std::nullopt;
      out.push_back(std::move(*s));
    }
    return Value(std::move(out));
  }
  return v;
}

inline void collect_vars(const Value& v, std::set<std::string>& out) {
  if (v.is_var()) out.insert(v.as_var().name);
  if (v.is_tuple())
    for (const auto& x : v.as_tuple()) collect_vars(x, out);
}

// The signature a set of graphs is written over.
struct Signature {
  std::set<std::string> attributes;
  std::set<std::string> attribute_vars;
  std::set<Value> values;
  std::set<std::string> value_vars;

  // Attribute names, attribute variables and value variables must be
  // pairwise disjoint.
  bool is_consistent() const {
    for (const auto& a : attributes)
      if (attribute_vars.count(a) || value_vars.count(a)) return false;
    for (const auto& a : attribute_vars)
      if (value_vars.count(a)) return false;
    return true;
  }

  void add(const Record& r) {
    for (const auto& [k, v] : r) {
      if (is_attribute_variable(k))
        attribute_vars.insert(k);
      else
        attributes.insert(k);
      if (v.is_ground())
        values.insert(v);
      else
        collect_vars(v, value_vars);
    }
  }
};

}  // namespace cbaco::pg
