#pragma once

// Brute-force reading of the duty-state axioms over one history. Position 0
// is the implicit initial event; EI holds for every strictly increasing pair
// of positions, and never for an absent closing event.

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace testsupport {

struct PlainEvent {
  std::string id, subj, act, obj;
};

struct PlainDuty {
  std::string p, a, r;
  std::optional<std::string> e1, e2;
};

struct AxiomVerdict {
  bool fulfilled = false;
  bool pending = false;
  bool violated = false;
  std::set<std::string> fulfilling;  // every e3 the fulfilled axiom admits
};

inline AxiomVerdict evaluate_axioms(const PlainDuty& d, const std::vector<PlainEvent>& h) {
  // h[0] stands for the initial event.
  auto pos = [&](const std::optional<std::string>& id) -> std::optional<std::size_t> {
    if (!id) return 0;
    for (std::size_t i = 1; i < h.size(); ++i)
      if (h[i].id == *id) return i;
    return std::nullopt;
  };
  auto ei = [&](std::optional<std::size_t> x, std::optional<std::size_t> y) {
    return x && y && *x < *y;
  };
  std::optional<std::size_t> s = pos(d.e1);
  std::optional<std::size_t> e = d.e2 ? pos(d.e2) : std::nullopt;
  auto acts = [&](std::size_t i) {
    return i > 0 && h[i].subj == d.p && h[i].act == d.a && h[i].obj == d.r;
  };
  AxiomVerdict v;
  if (!s) return v;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (ei(s, i) && (ei(i, e) || !ei(s, e)) && acts(i)) v.fulfilling.insert(h[i].id);
  v.fulfilled = !v.fulfilling.empty();
  bool any_after_start = false;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (ei(s, i) && acts(i)) any_after_start = true;
  v.pending = !ei(s, e) && !any_after_start;
  if (ei(s, e)) {
    bool inside = false;
    for (std::size_t i = 0; i < h.size(); ++i)
      if (ei(s, i) && ei(i, e) && acts(i)) inside = true;
    v.violated = !inside;
  }
  return v;
}

}  // namespace testsupport
