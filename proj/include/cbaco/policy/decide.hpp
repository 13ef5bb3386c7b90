#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cbaco/policy/paths.hpp"

namespace cbaco::policy {

enum class Verdict { grant, deny, undetermined };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::grant: return "grant";
    case Verdict::deny: return "deny";
    case Verdict::undetermined: return "undetermined";
  }
  return "?";
}

struct AuthorizationDecision {
  Verdict verdict = Verdict::undetermined;
  std::vector<Id> path;            // witness, empty when undetermined
  std::vector<std::string> names;  // ents along the witness
  std::string note;
};

inline AuthorizationDecision decide(const PolicyGraph& g, const std::string& p,
                                    const std::string& a, const std::string& r) {
  PolicyIndex idx(g);
  auto pn = idx.find(Kind::P, Value(p));
  if (!pn) throw UnknownEntity("unknown principal " + p);
  if (!idx.find(Kind::A, Value(a))) throw UnknownEntity("unknown action " + a);
  if (!idx.find(Kind::R, Value(r))) throw UnknownEntity("unknown resource " + r);

  AuthorizationDecision out;
  auto pr = idx.find(Kind::Pr, Value::tuple({a, r}));
  if (!pr) {
    out.note = "no permission node for (" + a + ", " + r + ")";
    return out;
  }
  static const Pattern grant = parse_pattern("PC, (->CC_Pr)*, CPr^A");
  static const Pattern ban = parse_pattern("PC, (<-CC_Pr)*, CPr^B");
  auto gp = find_path(idx, *pn, *pr, grant, false);
  auto bp = find_path(idx, *pn, *pr, ban, true);
  if (gp && bp)
    throw NotWellFormed("(" + p + ", " + a + ", " + r + ") is both granted and banned",
                        {"GrantBanConflict"});
  if (!gp && !bp) {
    out.note = "no grant or ban path from " + p;
    return out;
  }
  out.verdict = gp ? Verdict::grant : Verdict::deny;
  out.path = (gp ? gp : bp)->nodes;
  for (Id n : out.path) out.names.push_back(idx.ent(n).str());
  return out;
}

}  // namespace cbaco::policy
