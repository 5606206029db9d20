#pragma once

#include <array>
#include <optional>
#include <vector>

#include "orchard/geometry.hpp"
#include "orchard/image.hpp"
#include "orchard/scene.hpp"
#include "orchard/types.hpp"

namespace orchard {

struct CameraIntrinsics {
  int width = 640;
  int height = 480;
  double focal = 320.0;  // pixels
  double cx = 320.0;
  double cy = 240.0;
};

/// Level camera (no pitch or roll) looking along heading(yaw).
struct CameraPose {
  Vec3 position;
  double yaw = 0.0;
};

struct CameraModel {
  CameraIntrinsics intrinsics;
  CameraPose pose;

  Vec3 forward() const { return heading(pose.yaw); }
  Vec3 right() const { const Vec3 f = forward(); return {f.y, -f.x, 0.0}; }
  Vec3 down() const { return {0.0, 0.0, -1.0}; }

  /// Unit world-space ray through image position (col, row); pixel centres
  /// sit at half-integer coordinates.
  Vec3 ray_direction(double col, double row) const;
};

/// One RGB-D observation. `depth` holds the Euclidean distance along each
/// pixel's ray, +inf where the ray hits nothing.
struct Frame {
  RgbImage rgb;
  DepthImage depth;
  CameraModel camera;
  std::optional<CaptureTag> tag;
};

struct Palette {
  Rgb8 tomato{220, 30, 30};
  Rgb8 pepper{230, 200, 20};
  Rgb8 eggplant{110, 40, 160};
  Rgb8 foliage{40, 140, 50};
  Rgb8 board{240, 240, 240};
  Rgb8 background{70, 70, 75};
  Rgb8 propeller{15, 15, 15};

  Rgb8 fruit(PlantType t) const {
    switch (t) {
      case PlantType::Tomato: return tomato;
      case PlantType::Pepper: return pepper;
      case PlantType::Eggplant: return eggplant;
    }
    return tomato;
  }
};

struct RenderOptions {
  bool propellers = true;
  double propeller_radius = 50.0 / 640.0;  // fraction of image width
  double propeller_depth = 0.05;           // meters
  double occluder_margin = 0.10;           // disc radius beyond the fruit radius
  Palette palette;
};

enum class PrimitiveKind { Sphere, Ellipsoid, Rectangle, Disc };

/// Renderable surface described by an oriented frame. For rectangles and
/// discs axes[1] is the plane normal and half_extents.y is unused; a disc's
/// radius is half_extents.x.
struct Primitive {
  PrimitiveKind kind = PrimitiveKind::Sphere;
  Vec3 center;
  std::array<Vec3, 3> axes{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  Vec3 half_extents;
  Rgb8 color;

  /// Nearest hit distance along the unit ray, if any hit lies ahead.
  std::optional<double> intersect(const Vec3& origin, const Vec3& dir) const;
};

std::vector<Primitive> scene_primitives(const SceneSpec& scene, const RenderOptions& options = {});

Frame render_primitives(const std::vector<Primitive>& primitives, const CameraModel& camera,
                        const RenderOptions& options = {});

/// Z-buffered rasterization of the whole scene; pure in its inputs.
Frame render_frame(const SceneSpec& scene, const CameraModel& camera,
                   const RenderOptions& options = {});

}  // namespace orchard
