#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "cbaco/portgraph/value.hpp"

namespace cbaco::policy {

using pg::Value;

enum class Kind { P, C, A, R, G, E, Pr, O, D };

inline constexpr std::array<Kind, 9> all_kinds = {Kind::P, Kind::C,  Kind::A,
                                                  Kind::R, Kind::G,  Kind::E,
                                                  Kind::Pr, Kind::O, Kind::D};

inline const char* to_string(Kind k) {
  switch (k) {
    case Kind::P: return "P";
    case Kind::C: return "C";
    case Kind::A: return "A";
    case Kind::R: return "R";
    case Kind::G: return "G";
    case Kind::E: return "E";
    case Kind::Pr: return "Pr";
    case Kind::O: return "O";
    case Kind::D: return "D";
  }
  return "?";
}

inline std::optional<Kind> kind_from_string(const std::string& s) {
  for (Kind k : all_kinds)
    if (s == to_string(k)) return k;
  return std::nullopt;
}

// C, E and G nodes carry the In/Out ports used by directed edges.
inline bool has_direction_ports(Kind k) {
  return k == Kind::C || k == Kind::E || k == Kind::G;
}

inline constexpr const char* main_port = "main";
inline constexpr const char* in_port = "In";
inline constexpr const char* out_port = "Out";

// Edge type name for an unordered pair of endpoint kinds, or nullopt if no
// edge may join them.
inline std::optional<std::string> edge_type(Kind a, Kind b) {
  static const std::array<std::pair<Kind, Kind>, 17> pairs = {{
      {Kind::P, Kind::C},  {Kind::C, Kind::C},  {Kind::C, Kind::Pr},
      {Kind::C, Kind::O},  {Kind::Pr, Kind::A}, {Kind::Pr, Kind::R},
      {Kind::O, Kind::Pr}, {Kind::O, Kind::G},  {Kind::D, Kind::P},
      {Kind::D, Kind::Pr}, {Kind::D, Kind::E},  {Kind::E, Kind::E},
      {Kind::E, Kind::P},  {Kind::E, Kind::A},  {Kind::E, Kind::R},
      {Kind::E, Kind::G},  {Kind::G, Kind::G},
  }};
  for (const auto& [x, y] : pairs)
    if ((a == x && b == y) || (a == y && b == x))
      return std::string(to_string(x)) + to_string(y);
  return std::nullopt;
}

// Edge types whose `target` attribute gives them a direction.
inline bool is_directed_type(const std::string& t) {
  return t == "CC" || t == "GG" || t == "EE";
}

// Duty and obligation payloads use bottom for an absent scheme or event.
inline Value opt_value(const std::optional<std::string>& s) {
  return s ? Value(*s) : Value();
}

inline std::optional<std::string> value_opt(const Value& v) {
  if (v.is_string()) return v.as_string();
  return std::nullopt;
}

}  // namespace cbaco::policy
