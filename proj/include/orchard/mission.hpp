#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orchard/types.hpp"

namespace orchard {

inline constexpr int kBedCount = 27;

/// A plant type plus a strictly ascending, non-empty list of bed indices in 1..27.
struct Mission {
  PlantType plant = PlantType::Tomato;
  std::vector<int> beds;

  friend bool operator==(const Mission&, const Mission&) = default;
};

/// Parses the scheduler text form, e.g. "Tomato 2 3 8 14 25".
/// Throws ParseError carrying the offending token's offset.
Mission parse_mission(const std::string& text);

/// Canonical text form; parse_mission(to_string(m)) == m.
std::string to_string(const Mission& m);

/// Throws DomainError if the mission violates its invariants.
void validate(const Mission& m);

/// Plant type uniform over the three types; bed subset uniform over the
/// non-empty subsets of {1..27} (empty draws are rejected and redrawn).
Mission random_mission(std::uint64_t seed);

}  // namespace orchard
