#include <doctest.h>

#include <cmath>

#include "orchard/errors.hpp"
#include "orchard/scene.hpp"

using namespace orchard;

TEST_CASE("generation is deterministic and seed dependent") {
  CHECK(scene_to_json(generate_scene(3)) == scene_to_json(generate_scene(3)));
  CHECK(scene_to_json(generate_scene(3)) != scene_to_json(generate_scene(4)));
}

TEST_CASE("generated scenes satisfy every invariant") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const SceneSpec scene = generate_scene(s);
    CHECK_NOTHROW(validate(scene));
    for (const Bed& b : scene.beds) {
      CHECK(b.count_a <= b.fruit_count());
      CHECK(b.count_b <= b.fruit_count());
      CHECK(b.count_a + b.count_b >= b.fruit_count());
    }
  }
}

TEST_CASE("fruits on one plant never touch in the face plane") {
  const SceneSpec scene = generate_scene(17);
  const double gap = scene.config.fruits.min_gap;
  for (const Bed& b : scene.beds)
    for (const Plant& p : b.plants)
      for (std::size_t i = 0; i < p.fruits.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
          const Fruit& f = p.fruits[i];
          const Fruit& g = p.fruits[j];
          const double planar = std::hypot(f.center.x - g.center.x, f.center.z - g.center.z);
          CHECK(planar >= f.radius + g.radius + gap - 1e-9);
        }
}

TEST_CASE("json round trip is lossless") {
  const SceneSpec a = generate_scene(8);
  const SceneSpec b = scene_from_json(scene_to_json(a));
  CHECK(scene_to_json(b) == scene_to_json(a));
  CHECK(b.beds[4].plants[1].fruits.size() == a.beds[4].plants[1].fruits.size());
}

TEST_CASE("ground truth sums only the mission plant type") {
  const SceneSpec scene = generate_scene(21);
  for (int p = 0; p < 3; ++p) {
    Mission m{static_cast<PlantType>(p), {}};
    int expected = 0;
    for (const Bed& b : scene.beds) {
      m.beds.push_back(b.index);
      if (b.plant_type == m.plant) expected += b.fruit_count();
    }
    CHECK(ground_truth_count(scene, m) == expected);
  }
  CHECK_THROWS_AS(ground_truth_count(scene, Mission{PlantType::Tomato, {30}}), DomainError);
}

TEST_CASE("beds are disjoint and inside the bounds") {
  const SceneSpec scene = generate_scene(1);
  for (int i = 1; i <= kBedCount; ++i) {
    CHECK(scene.bounds.contains_box(scene.bed_box(i)));
    for (int j = 1; j < i; ++j) CHECK_FALSE(scene.bed_box(i).overlaps(scene.bed_box(j)));
  }
}

TEST_CASE("impossible layouts are rejected") {
  SceneConfig c;
  c.layout.rows = 2;
  CHECK_THROWS_AS(generate_scene(1, c), ConfigError);
  SceneConfig tight;
  tight.bounds = Aabb{{0, 0, 0}, {10, 10, 3}};
  CHECK_THROWS_AS(generate_scene(1, tight), ConfigError);
}

TEST_CASE("tampered scenes fail validation") {
  SceneSpec scene = generate_scene(2);
  for (Bed& b : scene.beds)
    if (b.fruit_count() > 0) {
      b.count_a += 1;
      break;
    }
  CHECK_THROWS_AS(validate(scene), DomainError);
}
