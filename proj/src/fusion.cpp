#include "orchard/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "orchard/errors.hpp"

namespace orchard {

BedCount merge_bed_sides(const BedObservation& first, const BedObservation& second,
                         double match_radius) {
  if (first.bed_index != second.bed_index)
    throw DomainError("cannot merge observations of different beds");
  if (first.side == second.side) throw DomainError("observations must cover opposite sides");
  if (match_radius < 0.0) throw DomainError("match radius must be non-negative");

  BedCount out;
  out.bed_index = first.bed_index;
  out.partial = first.missing || second.missing;

  const std::vector<FruitDetection> a = first.missing ? std::vector<FruitDetection>{} : first.detections();
  const std::vector<FruitDetection> b = second.missing ? std::vector<FruitDetection>{} : second.detections();

  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double dx = a[i].local.x + b[j].local.x;  // b mirrored
      const double dz = a[i].local.z - b[j].local.z;
      const double d = std::hypot(dx, dz);
      if (d <= match_radius) candidates.emplace_back(d, i, j);
    }
  }
  std::sort(candidates.begin(), candidates.end());

  std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
  for (const auto& [d, i, j] : candidates) {
    if (used_a[i] || used_b[j]) continue;
    used_a[i] = used_b[j] = true;
    out.matched_pairs.emplace_back(a[i], b[j]);
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!used_a[i]) out.singletons.push_back(a[i]);
  for (std::size_t j = 0; j < b.size(); ++j)
    if (!used_b[j]) out.singletons.push_back(b[j]);
  out.count = static_cast<int>(out.matched_pairs.size() + out.singletons.size());
  return out;
}

}  // namespace orchard
