#include "orchard/render.hpp"

#include <limits>

namespace orchard {

namespace {

constexpr double kHitEpsilon = 1e-6;
constexpr double kNearPlane = 1e-3;

std::optional<double> nearest_root(double b, double a, double c) {
  // Solves a t^2 + 2 b t + c = 0 for the smallest root above kHitEpsilon.
  const double disc = b * b - a * c;
  if (disc < 0.0) return std::nullopt;
  const double s = std::sqrt(disc);
  double t = (-b - s) / a;
  if (t > kHitEpsilon) return t;
  t = (-b + s) / a;
  if (t > kHitEpsilon) return t;
  return std::nullopt;
}

Primitive make_rect(const BedPose& pose, double lateral, double vertical, double half_w,
                    double half_h, Rgb8 color) {
  Primitive p;
  p.kind = PrimitiveKind::Rectangle;
  p.center = pose.center + pose.tangent() * lateral + Vec3{0, 0, vertical};
  p.axes = {pose.tangent(), pose.normal(), Vec3{0, 0, 1}};
  p.half_extents = {half_w, 0.0, half_h};
  p.color = color;
  return p;
}

}  // namespace

Vec3 CameraModel::ray_direction(double col, double row) const {
  const double u = (col - intrinsics.cx) / intrinsics.focal;
  const double v = (row - intrinsics.cy) / intrinsics.focal;
  return normalized(forward() + right() * u + down() * v);
}

std::optional<double> Primitive::intersect(const Vec3& origin, const Vec3& dir) const {
  const Vec3 oc = origin - center;
  switch (kind) {
    case PrimitiveKind::Sphere: {
      const double r = half_extents.x;
      return nearest_root(dot(oc, dir), 1.0, dot(oc, oc) - r * r);
    }
    case PrimitiveKind::Ellipsoid: {
      Vec3 o{dot(oc, axes[0]) / half_extents.x, dot(oc, axes[1]) / half_extents.y,
             dot(oc, axes[2]) / half_extents.z};
      Vec3 d{dot(dir, axes[0]) / half_extents.x, dot(dir, axes[1]) / half_extents.y,
             dot(dir, axes[2]) / half_extents.z};
      return nearest_root(dot(o, d), dot(d, d), dot(o, o) - 1.0);
    }
    case PrimitiveKind::Rectangle:
    case PrimitiveKind::Disc: {
      const double denom = dot(dir, axes[1]);
      if (std::abs(denom) < 1e-12) return std::nullopt;
      const double t = -dot(oc, axes[1]) / denom;
      if (t <= kHitEpsilon) return std::nullopt;
      const Vec3 p = oc + dir * t;
      if (kind == PrimitiveKind::Disc) {
        if (dot(p, p) > half_extents.x * half_extents.x) return std::nullopt;
      } else if (std::abs(dot(p, axes[0])) > half_extents.x ||
                 std::abs(dot(p, axes[2])) > half_extents.z) {
        return std::nullopt;
      }
      return t;
    }
  }
  return std::nullopt;
}

std::vector<Primitive> scene_primitives(const SceneSpec& scene, const RenderOptions& options) {
  const LayoutConfig& l = scene.config.layout;
  const Palette& pal = options.palette;
  std::vector<Primitive> out;
  for (const Bed& bed : scene.beds) {
    const BedPose& pose = bed.pose;
    const double hw = l.bed_width / 2.0;
    const double hh = l.bed_height / 2.0;
    const double pw = l.post_width / 2.0;
    // Shelf frame: two posts and a top rail.
    out.push_back(make_rect(pose, -hw + pw, 0.0, pw, hh, pal.board));
    out.push_back(make_rect(pose, hw - pw, 0.0, pw, hh, pal.board));
    out.push_back(make_rect(pose, 0.0, hh - pw, hw, pw, pal.board));

    for (const Plant& plant : bed.plants) {
      Primitive board;
      board.kind = PrimitiveKind::Rectangle;
      board.center = plant.board.center;
      board.axes = {pose.tangent(), pose.normal(), Vec3{0, 0, 1}};
      board.half_extents = {plant.board.half_width, 0.0, plant.board.half_height};
      board.color = pal.board;
      out.push_back(board);

      for (const FoliageBlob& blob : plant.foliage) {
        Primitive e;
        e.kind = PrimitiveKind::Ellipsoid;
        e.center = blob.center;
        e.axes = {pose.tangent(), pose.normal(), Vec3{0, 0, 1}};
        e.half_extents = blob.semi_axes;
        e.color = pal.foliage;
        out.push_back(e);
      }

      for (const Fruit& f : plant.fruits) {
        Primitive s;
        s.kind = PrimitiveKind::Sphere;
        s.center = f.center;
        s.half_extents = {f.radius, f.radius, f.radius};
        s.color = pal.fruit(bed.plant_type);
        out.push_back(s);

        if (f.visible_a != f.visible_b) {
          // Leaf disc on the mid-plane hides the fruit from the far side.
          const Vec3 d = f.center - pose.center;
          const double lat = dot(d, pose.tangent());
          const double ver = d.z;
          double radius = f.radius + options.occluder_margin;
          radius = std::min({radius, hw - std::abs(lat), hh - std::abs(ver)});
          Primitive disc;
          disc.kind = PrimitiveKind::Disc;
          disc.center = pose.center + pose.tangent() * lat + Vec3{0, 0, ver};
          disc.axes = {pose.tangent(), pose.normal(), Vec3{0, 0, 1}};
          disc.half_extents = {radius, 0.0, radius};
          disc.color = pal.foliage;
          out.push_back(disc);
        }
      }
    }
  }
  return out;
}

Frame render_primitives(const std::vector<Primitive>& primitives, const CameraModel& camera,
                        const RenderOptions& options) {
  const CameraIntrinsics& in = camera.intrinsics;
  Frame frame;
  frame.camera = camera;
  frame.rgb = RgbImage(in.width, in.height, options.palette.background);
  frame.depth = DepthImage(in.width, in.height, std::numeric_limits<float>::infinity());

  const Vec3 origin = camera.pose.position;
  const Vec3 fwd = camera.forward();
  const Vec3 right = camera.right();
  const Vec3 down = camera.down();

  std::vector<Vec3> rays(static_cast<std::size_t>(in.width) * in.height);
  for (int row = 0; row < in.height; ++row)
    for (int col = 0; col < in.width; ++col)
      rays[static_cast<std::size_t>(row) * in.width + col] = camera.ray_direction(col + 0.5, row + 0.5);

  std::vector<double> zbuf(rays.size(), std::numeric_limits<double>::infinity());

  for (const Primitive& prim : primitives) {
    // Screen-space bounds from the projected corners of the bounding box.
    double umin = 1e300, umax = -1e300, vmin = 1e300, vmax = -1e300;
    int behind = 0;
    for (int corner = 0; corner < 8; ++corner) {
      const Vec3 p = prim.center +
                     prim.axes[0] * (corner & 1 ? prim.half_extents.x : -prim.half_extents.x) +
                     prim.axes[1] * (corner & 2 ? prim.half_extents.y : -prim.half_extents.y) +
                     prim.axes[2] * (corner & 4 ? prim.half_extents.z : -prim.half_extents.z);
      const Vec3 d = p - origin;
      const double z = dot(d, fwd);
      if (z <= kNearPlane) {
        ++behind;
        continue;
      }
      const double u = in.focal * dot(d, right) / z + in.cx;
      const double v = in.focal * dot(d, down) / z + in.cy;
      umin = std::min(umin, u);
      umax = std::max(umax, u);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    if (behind == 8) continue;
    int c0 = 0, c1 = in.width - 1, r0 = 0, r1 = in.height - 1;
    if (behind == 0) {
      if (umax < 0 || vmax < 0 || umin > in.width || vmin > in.height) continue;
      c0 = std::max(0, static_cast<int>(std::floor(umin)) - 1);
      c1 = std::min(in.width - 1, static_cast<int>(std::ceil(umax)) + 1);
      r0 = std::max(0, static_cast<int>(std::floor(vmin)) - 1);
      r1 = std::min(in.height - 1, static_cast<int>(std::ceil(vmax)) + 1);
    }
    for (int row = r0; row <= r1; ++row) {
      for (int col = c0; col <= c1; ++col) {
        const std::size_t i = static_cast<std::size_t>(row) * in.width + col;
        const auto t = prim.intersect(origin, rays[i]);
        if (t && *t < zbuf[i]) {
          zbuf[i] = *t;
          frame.rgb.pixels()[i] = prim.color;
        }
      }
    }
  }
  for (std::size_t i = 0; i < zbuf.size(); ++i) frame.depth.pixels()[i] = static_cast<float>(zbuf[i]);

  if (options.propellers) {
    const double r = options.propeller_radius * in.width;
    for (int row = 0; row < in.height && row < r + 1; ++row) {
      for (int col = 0; col < in.width; ++col) {
        const double y = row + 0.5;
        const double dl = std::hypot(col + 0.5, y);
        const double dr = std::hypot(in.width - (col + 0.5), y);
        if (dl <= r || dr <= r) {
          frame.rgb(row, col) = options.palette.propeller;
          frame.depth(row, col) = static_cast<float>(options.propeller_depth);
        }
      }
    }
  }
  return frame;
}

Frame render_frame(const SceneSpec& scene, const CameraModel& camera, const RenderOptions& options) {
  return render_primitives(scene_primitives(scene, options), camera, options);
}

}  // namespace orchard
