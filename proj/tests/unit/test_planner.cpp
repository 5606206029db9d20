#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles/oracles.hpp"
#include "orchard/errors.hpp"
#include "orchard/planner.hpp"
#include "orchard/scene.hpp"

using namespace orchard;

namespace {

CostMatrix euclidean(const std::vector<Vec3>& pts) {
  CostMatrix c(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) c.at(i, j) = distance(pts[i], pts[j]);
  return c;
}

Trajectory line(double length, double dwell = 0.0) {
  std::vector<Waypoint> wps{{{0, 0, 1}, 0, CaptureTag{1, Side::A}}, {{length, 0, 1}, 0, CaptureTag{1, Side::B}}};
  return time_parameterize(chebyshev_path(wps, 8), 2.0, 1.0, dwell);
}

void check_limits(const Trajectory& tr, double v_max, double a_max) {
  const auto& s = tr.samples;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double dt = s[i].t - s[i - 1].t;
    REQUIRE(dt > 0.0);
    CHECK(distance(s[i].position, s[i - 1].position) / dt <= v_max + 1e-6);
    CHECK(norm(s[i].velocity) <= v_max + 1e-6);
    CHECK(norm(s[i].velocity - s[i - 1].velocity) / dt <= a_max + 1e-6);
  }
}

}  // namespace

TEST_CASE("waypoints: start plus two per bed, facing the bed") {
  const SceneSpec scene = generate_scene(1);
  const PlannerConfig pc;
  CHECK(build_waypoints(Mission{PlantType::Tomato, {4}}, scene, pc).size() == 3);
  CHECK(build_waypoints(Mission{PlantType::Tomato, {1, 5, 9, 10, 27}}, scene, pc).size() == 11);
  Mission all{PlantType::Tomato, {}};
  for (int i = 1; i <= kBedCount; ++i) all.beds.push_back(i);
  const auto wps = build_waypoints(all, scene, pc);
  REQUIRE(wps.size() == 55);
  CHECK_FALSE(wps[0].tag.has_value());
  for (std::size_t i = 1; i < wps.size(); ++i) {
    const Waypoint& w = wps[i];
    CHECK(scene.bounds.contains(w.position));
    const BedPose& p = scene.bed(w.tag->bed_index).pose;
    const Vec3 to_bed = normalized(Vec3{p.center.x - w.position.x, p.center.y - w.position.y, 0});
    CHECK(dot(heading(w.yaw), to_bed) == doctest::Approx(1.0));
    CHECK(std::abs(dot(w.position - p.center, p.normal())) == doctest::Approx(pc.standoff));
  }
}

TEST_CASE("standoff that hits a neighbouring bed is a planning error") {
  const SceneSpec scene = generate_scene(1);
  PlannerConfig pc;
  pc.standoff = 3.5;  // reaches into the next row
  CHECK_THROWS_AS(build_waypoints(Mission{PlantType::Tomato, {13}}, scene, pc), PlanningError);
  pc.standoff = 0.3;  // inside the safety margin
  CHECK_THROWS_AS(build_waypoints(Mission{PlantType::Tomato, {13}}, scene, pc), PlanningError);
}

TEST_CASE("cost matrix: open aisle, across a bed, diagonal") {
  const SceneSpec scene = generate_scene(1);
  const PlannerConfig pc;
  const BedPose& p = scene.bed(5).pose;
  std::vector<Waypoint> wps{{{2.0, 2.0, 1.0}, 0, {}},
                            {{11.3, 2.0, 1.0}, 0, {}},
                            {p.center - p.normal() * 1.25, 0, {}},
                            {p.center + p.normal() * 1.25, 0, {}}};
  const CostMatrix c = cost_matrix(wps, scene, pc);
  for (std::size_t i = 0; i < 4; ++i) CHECK(c(i, i) == 0.0);
  CHECK(c(0, 1) <= 1.05 * distance(wps[0].position, wps[1].position));
  const double chord = distance(wps[2].position, wps[3].position);
  CHECK(c(2, 3) > chord + 0.5);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(c(i, j) == c(j, i));
      CHECK(c(i, j) >= distance(wps[i].position, wps[j].position) - 1e-9);
    }
}

TEST_CASE("cost matrix triangle inequality on a full mission") {
  const SceneSpec scene = generate_scene(3);
  const PlannerConfig pc;
  const auto wps = build_waypoints(Mission{PlantType::Pepper, {1, 4, 9, 12, 17, 22, 26}}, scene, pc);
  const CostMatrix c = cost_matrix(wps, scene, pc);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, wps.size() - 1);
  for (int t = 0; t < 500; ++t) {
    const auto i = pick(rng), j = pick(rng), k = pick(rng);
    CHECK(c(i, k) <= c(i, j) + c(j, k) + 1e-9);
  }
}

TEST_CASE("unreachable waypoint is a planning error") {
  const Aabb bounds{{0, 0, 0}, {10, 10, 3}};
  // A wall splitting the space in two.
  OccupancyGrid grid(bounds, {Aabb{{4.8, -1, -1}, {5.2, 11, 4}}}, 0.25, 0.4);
  std::vector<Waypoint> wps{{{2, 5, 1.5}, 0, {}}, {{8, 5, 1.5}, 0, {}}};
  CHECK_THROWS_AS(Roadmap(wps, grid), PlanningError);
}

TEST_CASE("roadmap paths stay clear and join their endpoints") {
  const SceneSpec scene = generate_scene(1);
  const PlannerConfig pc;
  const auto wps = build_waypoints(Mission{PlantType::Tomato, {5, 14}}, scene, pc);
  const OccupancyGrid grid(scene, pc);
  const Roadmap rm(wps, grid);
  for (std::size_t i = 0; i < wps.size(); ++i)
    for (std::size_t j = 0; j < wps.size(); ++j) {
      if (i == j) continue;
      const auto path = rm.path(i, j);
      CHECK(distance(path.front(), wps[i].position) < 1e-12);
      CHECK(distance(path.back(), wps[j].position) < 1e-12);
      double len = 0;
      for (std::size_t k = 1; k < path.size(); ++k) len += distance(path[k - 1], path[k]);
      CHECK(len == doctest::Approx(rm.costs()(i, j)).epsilon(1e-9));
      const auto short_path = shortcut_path(path, grid);
      for (std::size_t k = 1; k < short_path.size(); ++k)
        CHECK(grid.segment_free(short_path[k - 1], short_path[k]));
    }
}

TEST_CASE("route: trivial and square instances") {
  const CostMatrix two = euclidean({{0, 0, 0}, {1, 0, 0}, {3, 0, 0}});
  CHECK(solve_route(two, 0) == std::vector<std::size_t>{0, 1, 2});

  // Square corners; the optimum is the perimeter walk.
  const CostMatrix sq = euclidean({{0, 0, 0}, {1, 1, 0}, {1, 0, 0}, {0, 1, 0}});
  const auto order = solve_route(sq, 0);
  CHECK(route_cost(sq, order) == doctest::Approx(3.0));
  CHECK(route_cost(sq, order) == doctest::Approx(oracle::tsp_optimum(sq, 0)));
  CHECK(order.front() == 0);
}

TEST_CASE("route: local optimality, start, permutation invariance") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 20);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Vec3> pts(3 + trial % 10);
    for (auto& p : pts) p = {u(rng), u(rng), 0};
    const CostMatrix c = euclidean(pts);
    const auto order = solve_route(c, 0);
    CHECK(order.front() == 0);
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
    CHECK(is_two_opt_optimal(c, order));
    CHECK(route_cost(c, order) <= route_cost(c, nearest_neighbor_route(c, 0)) + 1e-9);

    // Relabel everything except the start; total cost is unchanged.
    std::vector<Vec3> perm(pts.begin() + 1, pts.end());
    std::reverse(perm.begin(), perm.end());
    perm.insert(perm.begin(), pts[0]);
    const CostMatrix cp = euclidean(perm);
    if (pts.size() <= 8) {
      CHECK(route_cost(cp, solve_route(cp, 0)) <= 1.10 * oracle::tsp_optimum(cp, 0) + 1e-9);
    }
  }
}

TEST_CASE("chebyshev nodes closed forms") {
  const auto u2 = chebyshev_nodes(2);
  CHECK(std::abs(u2[0] - (1 - std::cos(std::numbers::pi / 4)) / 2) < 1e-12);
  CHECK(std::abs(u2[1] - (1 - std::cos(3 * std::numbers::pi / 4)) / 2) < 1e-12);
  CHECK(u2[0] == doctest::Approx(0.1464).epsilon(1e-3));
  const auto u3 = chebyshev_nodes(3);
  CHECK(std::abs((1 - 2 * u3[0]) - std::sqrt(3.0) / 2) < 1e-12);
  CHECK(std::abs(1 - 2 * u3[1]) < 1e-12);
  CHECK(std::abs((1 - 2 * u3[2]) + std::sqrt(3.0) / 2) < 1e-12);
  for (int n = 3; n <= 12; ++n) {
    const auto u = chebyshev_nodes(n);
    // gaps of 0, u_1..u_n, 1; gap n/2 straddles the middle
    std::vector<double> a{0.0};
    a.insert(a.end(), u.begin(), u.end());
    a.push_back(1.0);
    const double mid = a[n / 2 + 1] - a[n / 2];
    CHECK(a[1] - a[0] < mid);
    CHECK(a[n + 1] - a[n] < mid);
    for (int k = 0; k < n; ++k) CHECK(u[k] == doctest::Approx(1 - u[n - 1 - k]));
  }
  CHECK_THROWS_AS(chebyshev_nodes(0), DomainError);
}

TEST_CASE("dense path endpoints and corner stops") {
  std::vector<Waypoint> wps{{{0, 0, 1}, 0, {}}, {{4, 0, 1}, 1.0, CaptureTag{2, Side::A}}};
  const std::vector<std::vector<Vec3>> legs{{{0, 0, 1}, {2, 0, 1}, {4, 0, 1}}};
  const DensePath path = chebyshev_path(wps, legs, 5);
  CHECK(path.front().position == wps[0].position);
  CHECK(path.back().position == wps[1].position);
  CHECK(path.back().capture.has_value());
  int corners = 0;
  for (const auto& p : path) corners += p.stop && p.position == Vec3{2, 0, 1};
  CHECK(corners == 1);
  CHECK(path.size() == 2 + 5);  // odd n puts a sample on the corner
}

TEST_CASE("trapezoid timing") {
  CHECK(std::abs(line(10.0).duration - 7.0) <= 1e-9);
  CHECK(std::abs(trapezoid_duration(10, 2, 1) - 7.0) <= 1e-12);
  CHECK(trapezoid_duration(2.0, 2, 1) == doctest::Approx(2 * std::sqrt(2.0)));
  for (double L : {0.5, 1.0, 3.9, 4.0, 4.1, 17.0})
    CHECK(trapezoid_duration(L, 2, 1) == doctest::Approx(oracle::trapezoid_time(L, 2, 1)).epsilon(1e-12));
  // Triangular profile peaks at sqrt(a L).
  const Trajectory tri = line(2.0);
  double peak = 0;
  for (const auto& s : tri.samples) peak = std::max(peak, norm(s.velocity));
  CHECK(peak <= std::sqrt(2.0) + 1e-9);
  CHECK(line(10.0, 1.0).duration == doctest::Approx(9.0));
  CHECK(line(10.0).length == doctest::Approx(10.0));
}

TEST_CASE("zero-length path takes only the dwell") {
  DensePath p{{{1, 1, 1}, 0, true, CaptureTag{1, Side::A}}};
  const Trajectory tr = time_parameterize(p, 2, 1, 1.5);
  CHECK(tr.duration == doctest::Approx(1.5));
  CHECK(tr.length == 0.0);
  REQUIRE(tr.capture_windows.size() == 1);
  CHECK(tr.capture_windows[0].t_end - tr.capture_windows[0].t_begin == doctest::Approx(1.5));
  CHECK_THROWS_AS(time_parameterize(p, 0, 1, 1), DomainError);
  CHECK_THROWS_AS(time_parameterize(p, 1, -1, 1), DomainError);
}

TEST_CASE("planned missions are collision free and within limits") {
  const PlannerConfig pc;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const SceneSpec scene = generate_scene(seed);
    const Mission m = random_mission(seed + 100);
    const FlightPlan plan = plan_flight(m, scene, pc);
    const FlightResult fr = simulate_flight(plan.trajectory, scene, pc);
    CHECK(fr.collisions == 0);
    CHECK(plan.trajectory.capture_windows.size() == 2 * m.beds.size());
    for (const auto& w : plan.trajectory.capture_windows) CHECK(w.t_end - w.t_begin == doctest::Approx(pc.dwell));
    check_limits(plan.trajectory, pc.v_max, pc.a_max);
    double len = 0;
    for (std::size_t i = 1; i < plan.trajectory.samples.size(); ++i)
      len += distance(plan.trajectory.samples[i - 1].position, plan.trajectory.samples[i].position);
    CHECK(plan.trajectory.length == doctest::Approx(len).epsilon(1e-12));
    CHECK(fr.t_m == plan.trajectory.duration);
  }
}

TEST_CASE("constructed violations are counted as events") {
  const Aabb bounds{{0, 0, 0}, {10, 10, 3}};
  const std::vector<Aabb> box{Aabb{{4, 4, 0}, {6, 6, 2}}};
  auto fly = [&](std::vector<Vec3> pts) {
    std::vector<Waypoint> wps;
    for (const auto& p : pts) wps.push_back({p, 0, {}});
    return simulate_flight(time_parameterize(chebyshev_path(wps, 4), 2, 1, 0), bounds, box, 0.25);
  };
  CHECK(fly({{1, 1, 1}, {9, 1, 1}}).collisions == 0);
  CHECK(fly({{1, 5, 1}, {9, 5, 1}}).collisions == 1);
  // Out through the ceiling twice.
  CHECK(fly({{1, 1, 1}, {1, 1, 3.5}, {2, 1, 1}, {2, 1, 3.5}, {3, 1, 1}}).collisions == 2);
}
