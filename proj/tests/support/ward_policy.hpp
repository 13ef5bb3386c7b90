#pragma once

// A small policy with two obligations for exhaustive history checks, and the
// alphabet of events used to build the histories.

#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "support/duty_oracle.hpp"

namespace testsupport {

using nlohmann::json;

// Principal n in category staff owes `file form` from the first event until a
// discharge of anyone, and `note form` from each admission until the same
// principal's discharge.
inline json ward_policy() {
  using A = json::array_t;
  json var_x = {{"var", "X"}};
  return {{"principals", A{"n", "m"}},
          {"categories", A{"staff"}},
          {"actions", A{"admit", "discharge", "file", "note"}},
          {"resources", A{"w", "form"}},
          {"schemes", A{{{"name", "admitted"}, {"vars", A{"X"}},
                         {"pattern", {{"act", "admit"}, {"subj", var_x}}}},
                        {{"name", "discharged"}, {"vars", A{"X"}},
                         {"pattern", {{"act", "discharge"}, {"subj", var_x}}}}}},
          {"pca", A{A{"n", "staff"}}},
          {"arca", A{A{"file", "form", "staff"}}},
          {"oca", A{A{"file", "form", nullptr, "discharged", "staff"},
                    A{"note", "form", "admitted", "discharged", "staff"}}}};
}

struct Symbol {
  std::string subj, act, obj;
};

inline const std::vector<Symbol> alphabet = {
    {"n", "admit", "w"}, {"n", "discharge", "w"}, {"m", "discharge", "w"},
    {"n", "file", "form"}, {"n", "note", "form"}};

// (principal, action, resource, start event, end event)
using DutyKey = std::tuple<std::string, std::string, std::string, std::optional<std::string>,
                           std::optional<std::string>>;

// Independent expectation of the duty set: the first-event duty and one per
// admission, each closed by the first later discharge whose subject agrees.
// h[0] is the initial-event placeholder.
inline std::set<DutyKey> ward_duties(const std::vector<PlainEvent>& h) {
  std::set<DutyKey> out;
  if (h.size() < 2) return out;
  auto first_discharge = [&](std::size_t after, const std::optional<std::string>& subj) {
    std::optional<std::string> id;
    for (std::size_t j = after + 1; j < h.size() && !id; ++j)
      if (h[j].act == "discharge" && (!subj || h[j].subj == *subj)) id = h[j].id;
    return id;
  };
  out.insert({"n", "file", "form", std::nullopt, first_discharge(0, std::nullopt)});
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i].act == "admit")
      out.insert({"n", "note", "form", h[i].id, first_discharge(i, h[i].subj)});
  return out;
}

}  // namespace testsupport
