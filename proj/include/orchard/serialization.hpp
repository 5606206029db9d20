#pragma once

#include <json.hpp>

#include "orchard/detector.hpp"
#include "orchard/geometry.hpp"
#include "orchard/planner.hpp"
#include "orchard/render.hpp"
#include "orchard/scene.hpp"

namespace orchard {

// Key order is insertion order so that serialized files are byte-stable.
using Json = nlohmann::ordered_json;

/// Assigns j[key] to `out` when present; absent keys keep their defaults.
template <typename T>
void read_optional(const Json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) it->get_to(out);
}

void to_json(Json& j, const Vec3& v);
void from_json(const Json& j, Vec3& v);
void to_json(Json& j, const Aabb& b);
void from_json(const Json& j, Aabb& b);
void to_json(Json& j, const LayoutConfig& c);
void from_json(const Json& j, LayoutConfig& c);
void to_json(Json& j, const FruitConfig& c);
void from_json(const Json& j, FruitConfig& c);
void to_json(Json& j, const SceneConfig& c);
void from_json(const Json& j, SceneConfig& c);
void to_json(Json& j, const HsvRange& r);
void from_json(const Json& j, HsvRange& r);
void to_json(Json& j, const ColorProfile& p);
void from_json(const Json& j, ColorProfile& p);
void to_json(Json& j, const DetectorParams& p);
void from_json(const Json& j, DetectorParams& p);
void to_json(Json& j, const PlannerConfig& c);
void from_json(const Json& j, PlannerConfig& c);
void to_json(Json& j, const CameraIntrinsics& c);
void from_json(const Json& j, CameraIntrinsics& c);

}  // namespace orchard
