#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "orchard/geometry.hpp"
#include "orchard/mission.hpp"
#include "orchard/scene.hpp"
#include "orchard/types.hpp"

namespace orchard {

struct PlannerConfig {
  double standoff = 1.25;          // waypoint distance from the bed mid-plane
  double grid_resolution = 0.25;
  double drone_radius = 0.25;
  double safety_margin = 0.15;
  double v_max = 2.0;              // m/s
  double a_max = 1.0;              // m/s^2
  double dwell = 1.0;              // seconds held still at each capture pose
  int nodes_per_segment = 8;       // Chebyshev samples per leg
  Vec3 start{1.0, 1.0, 1.0};
  double start_yaw = 0.0;

  double inflation() const { return drone_radius + safety_margin; }
};

void validate(const PlannerConfig& config);

struct Waypoint {
  Vec3 position;
  double yaw = 0.0;
  std::optional<CaptureTag> tag;  // empty for the start pose
};

/// Start pose followed by an (A, B) pair per mission bed, each at
/// `standoff` from the bed mid-plane and facing it. Throws PlanningError if a
/// waypoint is out of bounds or too close to a bed.
std::vector<Waypoint> build_waypoints(const Mission& mission, const SceneSpec& scene,
                                      const PlannerConfig& config);

/// Regular 3-D lattice over the flight bounds. A node is free when a sphere
/// of radius `inflation` around it stays inside the bounds and clear of every
/// obstacle box.
class OccupancyGrid {
public:
  OccupancyGrid(const Aabb& bounds, std::vector<Aabb> obstacles, double resolution,
                double inflation);
  OccupancyGrid(const SceneSpec& scene, const PlannerConfig& config);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  int node_count() const { return nx_ * ny_ * nz_; }
  double resolution() const { return resolution_; }

  int index(int i, int j, int k) const { return (k * ny_ + j) * nx_ + i; }
  Vec3 position(int node) const;
  bool free(int node) const { return free_[static_cast<std::size_t>(node)] != 0; }

  bool point_free(const Vec3& p) const;
  /// Point checks every 5 cm along the segment.
  bool segment_free(const Vec3& a, const Vec3& b) const;

  /// Lattice node at p (within 1e-9 per axis), if any.
  std::optional<int> node_at(const Vec3& p) const;

private:
  Aabb bounds_;
  std::vector<Aabb> obstacles_;
  double resolution_;
  double inflation_;
  int nx_ = 0, ny_ = 0, nz_ = 0;
  std::vector<std::uint8_t> free_;
};

/// Symmetric travel costs with zero diagonal.
struct CostMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  CostMatrix() = default;
  explicit CostMatrix(std::size_t size) : n(size), values(size * size, 0.0) {}

  double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }
};

/// Shortest collision-free lattice paths between all waypoint pairs
/// (26-connected, Dijkstra). Waypoints off the lattice join it through the
/// free corners of their enclosing cell.
class Roadmap {
public:
  Roadmap(const std::vector<Waypoint>& waypoints, const OccupancyGrid& grid);

  const CostMatrix& costs() const { return costs_; }
  /// Polyline from waypoint i to waypoint j, endpoints included.
  std::vector<Vec3> path(std::size_t from, std::size_t to) const;

private:
  const OccupancyGrid* grid_;
  std::vector<Vec3> waypoint_pos_;
  std::vector<int> waypoint_node_;
  std::vector<std::vector<std::pair<int, double>>> extra_edges_;  // virtual node adjacency
  std::vector<std::vector<int>> parents_;                        // per source waypoint
  CostMatrix costs_;

  Vec3 node_position(int node) const;
};

/// Throws PlanningError when some pair is unreachable.
CostMatrix cost_matrix(const std::vector<Waypoint>& waypoints, const SceneSpec& scene,
                       const PlannerConfig& config);

/// Greedy string pulling: drops lattice vertices while the shortcut stays free.
std::vector<Vec3> shortcut_path(const std::vector<Vec3>& polyline, const OccupancyGrid& grid);

double route_cost(const CostMatrix& costs, std::span<const std::size_t> order);

/// Open path from `start`, nearest neighbour with ties to the lower index.
std::vector<std::size_t> nearest_neighbor_route(const CostMatrix& costs, std::size_t start);

/// Nearest neighbour, then 2-opt and Or-opt moves until neither improves.
/// The route starts at `start` and does not return to it.
std::vector<std::size_t> solve_route(const CostMatrix& costs, std::size_t start);

/// True when no single segment reversal shortens the open route.
bool is_two_opt_optimal(const CostMatrix& costs, std::span<const std::size_t> order);

/// u_k = (1 - cos(pi (2k - 1) / (2n))) / 2 for k = 1..n, ascending in (0, 1).
std::vector<double> chebyshev_nodes(int n);

struct PathPoint {
  Vec3 position;
  double yaw = 0.0;
  bool stop = false;  // the vehicle comes to rest here (waypoints and corners)
  std::optional<CaptureTag> capture;
};

using DensePath = std::vector<PathPoint>;

/// Resamples every leg (polyline between consecutive waypoints) at the
/// Chebyshev arc-length fractions of chebyshev_nodes(n). Interior polyline
/// vertices are kept as stop points so the path never leaves the polyline.
DensePath chebyshev_path(const std::vector<Waypoint>& ordered,
                         const std::vector<std::vector<Vec3>>& legs, int n);
/// Same with straight legs.
DensePath chebyshev_path(const std::vector<Waypoint>& ordered, int n);

struct TrajectorySample {
  double t = 0.0;
  Vec3 position;
  double yaw = 0.0;
  Vec3 velocity;
};

struct CaptureWindow {
  double t_begin = 0.0;
  double t_end = 0.0;
  CaptureTag tag;
  Vec3 position;
  double yaw = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double duration = 0.0;  // includes capture dwell
  double length = 0.0;    // sum of chords between samples
  std::vector<CaptureWindow> capture_windows;
};

/// Trapezoidal speed profile on every straight piece between stop points,
/// plus `dwell` seconds at rest at each capture point. Throws DomainError if
/// v_max or a_max is not positive or dwell is negative.
Trajectory time_parameterize(const DensePath& path, double v_max, double a_max, double dwell);

/// Duration of a rest-to-rest trapezoidal move over `length`.
double trapezoid_duration(double length, double v_max, double a_max);

struct FlightResult {
  double t_m = 0.0;
  double d_m = 0.0;
  int collisions = 0;
};

/// Sweeps the drone sphere along the trajectory; every maximal run of
/// bed contact or bounds violation is one collision event.
FlightResult simulate_flight(const Trajectory& trajectory, const Aabb& bounds,
                             std::span<const Aabb> obstacles, double drone_radius);
FlightResult simulate_flight(const Trajectory& trajectory, const SceneSpec& scene,
                             const PlannerConfig& config);

/// Everything produced while planning one mission.
struct FlightPlan {
  std::vector<Waypoint> waypoints;       // start first, then per bed A, B
  std::vector<std::size_t> order;        // visit order into `waypoints`
  std::vector<Waypoint> ordered;
  std::vector<std::vector<Vec3>> legs;   // shortcut polylines between ordered waypoints
  DensePath path;
  Trajectory trajectory;
  double route_cost = 0.0;
};

FlightPlan plan_flight(const Mission& mission, const SceneSpec& scene, const PlannerConfig& config);

/// CSV with header "t,x,y,z,yaw".
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace orchard
