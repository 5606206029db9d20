#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles/oracles.hpp"
#include "orchard/render.hpp"
#include "orchard/scene.hpp"

using namespace orchard;

namespace {
CameraModel facing_bed(const SceneSpec& scene, int index, Side side, double standoff = 1.25) {
  const BedPose& p = scene.bed(index).pose;
  const double sign = side == Side::A ? -1.0 : 1.0;
  return {{}, {p.center + p.normal() * (sign * standoff), p.yaw + sign * -std::numbers::pi / 2}};
}
}  // namespace

TEST_CASE("pixel centre ray is the optical axis") {
  CameraModel cam{{}, {{1, 2, 3}, 0.3}};
  const Vec3 d = cam.ray_direction(cam.intrinsics.cx, cam.intrinsics.cy);
  CHECK(distance(d, heading(0.3)) < 1e-12);
  const Vec3 corner = cam.ray_direction(0, 0);
  CHECK(norm(corner) == doctest::Approx(1.0));
  CHECK(corner.z > 0);  // image top looks up
}

TEST_CASE("depth matches brute-force ray casting") {
  const SceneSpec scene = generate_scene(12);
  RenderOptions opt;
  opt.propellers = false;
  const auto prims = scene_primitives(scene, opt);
  for (Side side : {Side::A, Side::B}) {
    const CameraModel cam = facing_bed(scene, 14, side);
    const Frame f = render_primitives(prims, cam, opt);
    int checked = 0;
    for (int r = 0; r < f.depth.height(); r += 9)
      for (int c = 0; c < f.depth.width(); c += 11) {
        const double want = oracle::ray_depth(prims, cam, r, c);
        if (std::isinf(want)) {
          CHECK(std::isinf(f.depth(r, c)));
        } else {
          CHECK(std::abs(f.depth(r, c) - want) <= 1e-5 * want);
        }
        ++checked;
      }
    CHECK(checked > 2000);
  }
}

TEST_CASE("sky pixels have infinite depth and background colour") {
  const SceneSpec scene = generate_scene(1);
  CameraModel cam{{}, {{14.5, 6.75, 2.5}, 0.0}};
  cam.intrinsics.width = 64;
  cam.intrinsics.height = 48;
  cam.intrinsics.cx = 32;
  cam.intrinsics.cy = 24;
  cam.intrinsics.focal = 32;
  RenderOptions opt;
  opt.propellers = false;
  const Frame f = render_frame(scene, cam, opt);
  CHECK(std::isinf(f.depth(0, 32)));
  CHECK(f.rgb(0, 32) == opt.palette.background);
}

TEST_CASE("propellers occupy both top corners") {
  const SceneSpec scene = generate_scene(1);
  const CameraModel cam = facing_bed(scene, 5, Side::A);
  const Frame f = render_frame(scene, cam);
  RenderOptions opt;
  CHECK(f.rgb(0, 0) == opt.palette.propeller);
  CHECK(f.rgb(0, f.rgb.width() - 1) == opt.palette.propeller);
  CHECK(f.depth(0, 0) == doctest::Approx(opt.propeller_depth));
  CHECK_FALSE(f.rgb(f.rgb.height() - 1, 0) == opt.palette.propeller);
  CHECK_FALSE(f.rgb(0, f.rgb.width() / 2) == opt.palette.propeller);
}

TEST_CASE("rendering is pure") {
  const SceneSpec scene = generate_scene(4);
  const CameraModel cam = facing_bed(scene, 20, Side::B);
  const Frame a = render_frame(scene, cam);
  const Frame b = render_frame(scene, cam);
  CHECK(a.rgb == b.rgb);
  CHECK(a.depth == b.depth);
}

TEST_CASE("one-sided fruits are hidden from the other side") {
  SceneSpec scene = generate_scene(31);
  // Find a bed with a fruit visible from A only and check its centre pixel colour from each side.
  for (const Bed& b : scene.beds)
    for (const Plant& p : b.plants)
      for (const Fruit& fr : p.fruits) {
        if (fr.visible_b) continue;
        RenderOptions opt;
        opt.propellers = false;
        for (Side side : {Side::A, Side::B}) {
          const CameraModel cam = facing_bed(scene, b.index, side);
          const Vec3 d = fr.center - cam.pose.position;
          const double z = dot(d, cam.forward());
          const int col = static_cast<int>(cam.intrinsics.focal * dot(d, cam.right()) / z + cam.intrinsics.cx);
          const int row = static_cast<int>(cam.intrinsics.focal * dot(d, cam.down()) / z + cam.intrinsics.cy);
          const Frame f = render_frame(scene, cam, opt);
          const bool fruit_colour = f.rgb(row, col) == opt.palette.fruit(b.plant_type);
          CHECK(fruit_colour == (side == Side::A));
        }
        return;
      }
  FAIL("scene has no one-sided fruit");
}
