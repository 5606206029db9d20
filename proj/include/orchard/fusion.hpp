#pragma once

#include <utility>
#include <vector>

#include "orchard/detector.hpp"

namespace orchard {

struct BedCount {
  int bed_index = 0;
  int count = 0;
  std::vector<std::pair<FruitDetection, FruitDetection>> matched_pairs;  // (first obs, second obs)
  std::vector<FruitDetection> singletons;
  bool partial = false;  // one side was not observed
};

/// Mirrors the second observation's lateral coordinate (the two viewers
/// face each other) and greedily pairs detections closest-first while their
/// planar distance is within match_radius. The observations must cover
/// opposite sides of the same bed; DomainError otherwise.
BedCount merge_bed_sides(const BedObservation& first, const BedObservation& second,
                         double match_radius);

}  // namespace orchard
