#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace orchard {

enum class PlantType { Tomato = 0, Pepper = 1, Eggplant = 2 };

inline constexpr int kPlantTypeCount = 3;

/// The two faces of a plant bed. A faces the -normal half-space, B the +normal one.
enum class Side { A = 0, B = 1 };

inline constexpr Side opposite(Side s) { return s == Side::A ? Side::B : Side::A; }

std::string_view plant_name(PlantType t);          // "tomato"
std::string plant_display_name(PlantType t);       // "Tomato"
std::optional<PlantType> plant_from_name(std::string_view name);  // case-insensitive
std::string_view side_name(Side s);                // "A" / "B"

/// Identifies what a capture waypoint looks at.
struct CaptureTag {
  int bed_index = 0;
  Side side = Side::A;
  friend bool operator==(const CaptureTag&, const CaptureTag&) = default;
};

}  // namespace orchard
