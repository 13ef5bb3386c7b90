#pragma once

// Which structure each entity of a policy document belongs to, read off the
// document's relation lists. Keys are "<kind>:<name>", with Pr and O names
// joined by '|'.

#include <map>
#include <set>
#include <string>
#include <utility>

#include "support/random_policy.hpp"

namespace testsupport {

struct Membership {
  std::set<std::string> permission, obligation;
};

inline std::string key(const std::string& kind, const std::string& name) { return kind + ":" + name; }

inline Membership membership(const json& doc) {
  Membership m;
  Oracle o = oracle(doc);
  auto null_or = [](const json& j) { return j.is_null() ? std::string("_") : j.get<std::string>(); };

  // Categories owning a relation pass membership down to every subcategory.
  auto categories_below = [&](const std::string& c, const std::vector<std::vector<bool>>& up) {
    std::set<std::string> out;
    for (std::size_t i = 0; i < o.C.size(); ++i)
      if (up[i][o.index(c)]) out.insert(o.C[i]);
    return out;
  };
  auto add_categories = [&](std::set<std::string>& into, const std::set<std::string>& cs) {
    for (const auto& c : cs) into.insert(key("C", c));
    for (const auto& pc : doc.value("pca", json::array()))
      if (cs.count(pc[1].get<std::string>())) into.insert(key("P", pc[0]));
  };

  for (const char* rel : {"arca", "barca"})
    for (const auto& x : doc.value(rel, json::array())) {
      std::string a = x[0], r = x[1], c = x[2];
      add_categories(m.permission, categories_below(c, o.up_auth));
      m.permission.insert(key("Pr", a + "|" + r));
      m.permission.insert(key("A", a));
      m.permission.insert(key("R", r));
    }

  // Schemes: pattern fields equal; an event links to the matching schemes
  // that no other matching scheme already reaches upwards.
  std::map<std::string, json> patterns;
  for (const auto& s : doc.value("schemes", json::array())) patterns[s["name"]] = s["pattern"];
  std::map<std::string, std::set<std::string>> above;  // reflexive-transitive GG
  for (const auto& [n, _] : patterns) above[n] = {n};
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& x : doc.value("gg", json::array()))
      for (auto& [n, up] : above)
        if (up.count(x[0].get<std::string>()) && up.insert(x[1].get<std::string>()).second) grew = true;
  }
  std::set<std::string> obl_schemes;
  for (const auto& x : doc.value("oca", json::array()))
    for (int i : {2, 3})
      if (!x[i].is_null())
        for (const auto& [n, up] : above)
          if (up.count(x[i].get<std::string>())) obl_schemes.insert(n);

  for (const auto& e : doc.value("events", json::array())) {
    std::set<std::string> matching;
    for (const auto& [n, pat] : patterns) {
      bool ok = true;
      for (const auto& [k, v] : pat.items())
        if (!e.contains(k) || e[k] != v) ok = false;
      if (ok) matching.insert(n);
    }
    bool linked = false;
    for (const auto& s : matching) {
      bool implied = false;
      for (const auto& t : matching)
        if (t != s && above[t].count(s)) implied = true;
      if (!implied && obl_schemes.count(s)) linked = true;
    }
    if (!linked) continue;
    m.obligation.insert(key("E", e["id"]));
    m.obligation.insert(key("P", e["subj"]));
    m.obligation.insert(key("A", e["act"]));
    m.obligation.insert(key("R", e["obj"]));
  }

  for (const auto& x : doc.value("oca", json::array())) {
    std::string a = x[0], r = x[1], c = x[4];
    add_categories(m.obligation, categories_below(c, o.up_obl));
    m.obligation.insert(key("O", a + "|" + r + "|" + null_or(x[2]) + "|" + null_or(x[3])));
    m.obligation.insert(key("Pr", a + "|" + r));
    m.obligation.insert(key("A", a));
    m.obligation.insert(key("R", r));
  }
  for (const auto& s : obl_schemes) m.obligation.insert(key("G", s));
  return m;
}

}  // namespace testsupport
