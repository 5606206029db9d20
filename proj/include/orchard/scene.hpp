#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orchard/geometry.hpp"
#include "orchard/mission.hpp"
#include "orchard/types.hpp"

namespace orchard {

/// Warehouse grid: `rows` rows of `beds_per_row` beds running along +x,
/// with an aisle on both sides of every row. Lengths in meters.
struct LayoutConfig {
  int rows = 3;
  int beds_per_row = 9;
  double bed_width = 2.0;    // along the row
  double bed_height = 1.5;   // visible face
  double bed_depth = 0.5;    // across the row; plants sit on the mid-plane
  double bed_gap = 1.0;      // between neighbouring beds in a row
  double aisle_width = 3.0;
  double base_height = 0.25;  // floor to bottom of the face
  double end_margin = 1.5;    // free space past the row ends
  double ceiling = 3.0;
  double post_width = 0.05;   // white frame posts and top rail
  double planter_height = 0.35;
};

struct FruitConfig {
  int min_per_plant = 0;
  int max_per_plant = 6;
  double radius_min = 0.03;
  double radius_max = 0.06;
  double one_side_probability = 0.25;
  double min_gap = 0.03;        // planar clearance between fruit silhouettes
  double slot_margin = 0.04;    // clearance from slot boundaries
};

struct SceneConfig {
  LayoutConfig layout;
  FruitConfig fruits;
  std::optional<Aabb> bounds;  // derived from the layout when absent
};

/// Bed pose: `center` is the middle of the face on the bed's mid-plane;
/// `yaw` rotates the bed tangent away from +x.
struct BedPose {
  Vec3 center;
  double yaw = 0.0;

  Vec3 tangent() const { return heading(yaw); }
  /// Side A looks along +normal, side B along -normal.
  Vec3 normal() const { return {-std::sin(yaw), std::cos(yaw), 0.0}; }
};

struct Fruit {
  Vec3 center;
  double radius = 0.0;
  bool visible_a = true;
  bool visible_b = true;

  bool visible_from(Side s) const { return s == Side::A ? visible_a : visible_b; }
};

/// Flattened ellipsoid of leaves; semi-axes are (tangent, normal, vertical).
struct FoliageBlob {
  Vec3 center;
  Vec3 semi_axes;
};

/// White planter panel at the bottom of a plant slot, on the mid-plane.
struct Board {
  Vec3 center;
  double half_width = 0.0;
  double half_height = 0.0;
};

struct Plant {
  std::vector<Fruit> fruits;
  std::vector<FoliageBlob> foliage;
  Board board;
};

struct Bed {
  int index = 0;
  PlantType plant_type = PlantType::Tomato;
  BedPose pose;
  std::array<Plant, 3> plants;  // left, centre, right as seen from side A
  int count_a = 0;              // fruits visible from side A
  int count_b = 0;

  int fruit_count() const;
  int side_count(Side s) const { return s == Side::A ? count_a : count_b; }
};

struct SceneSpec {
  std::uint64_t seed = 0;
  SceneConfig config;
  Aabb bounds;
  std::vector<Bed> beds;  // beds[i].index == i + 1

  const Bed& bed(int index) const;
  /// Collision volume of a bed: full face extent and depth, down to the floor.
  Aabb bed_box(int index) const;
  std::vector<Aabb> bed_boxes() const;
};

Aabb default_bounds(const LayoutConfig& layout);
BedPose bed_pose(const LayoutConfig& layout, int index);

/// Throws ConfigError when the layout cannot host 27 beds inside the bounds.
void validate(const SceneConfig& config);

/// Deterministic in (seed, config).
SceneSpec generate_scene(std::uint64_t seed, const SceneConfig& config = {});

/// Checks every SceneSpec invariant; throws DomainError naming the first violation.
void validate(const SceneSpec& scene);

/// Sum over mission beds of fruits of the mission plant type; each fruit
/// counts once regardless of which sides see it.
int ground_truth_count(const SceneSpec& scene, const Mission& mission);

std::string scene_to_json(const SceneSpec& scene);
SceneSpec scene_from_json(const std::string& text);
void save_scene(const std::string& path, const SceneSpec& scene);
SceneSpec load_scene(const std::string& path);

}  // namespace orchard
