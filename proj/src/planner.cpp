#include "orchard/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "orchard/errors.hpp"

namespace orchard {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-9;
constexpr double kSegmentStep = 0.05;
constexpr double kSweepStep = 0.02;

std::string fmt_vec(const Vec3& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.3f, %.3f, %.3f)", p.x, p.y, p.z);
  return buf;
}

}  // namespace

void validate(const PlannerConfig& c) {
  if (!(c.standoff > 0.0)) throw ConfigError("planner: standoff must be positive");
  if (!(c.grid_resolution > 0.0)) throw ConfigError("planner: grid_resolution must be positive");
  if (!(c.drone_radius > 0.0)) throw ConfigError("planner: drone_radius must be positive");
  if (c.safety_margin < 0.0) throw ConfigError("planner: safety_margin must be >= 0");
  if (!(c.v_max > 0.0)) throw ConfigError("planner: v_max must be positive");
  if (!(c.a_max > 0.0)) throw ConfigError("planner: a_max must be positive");
  if (c.dwell < 0.0) throw ConfigError("planner: dwell must be >= 0");
  if (c.nodes_per_segment < 1) throw ConfigError("planner: nodes_per_segment must be >= 1");
}

std::vector<Waypoint> build_waypoints(const Mission& mission, const SceneSpec& scene,
                                      const PlannerConfig& config) {
  validate(mission);
  std::vector<Waypoint> out;
  out.reserve(1 + 2 * mission.beds.size());
  out.push_back({config.start, wrap_angle(config.start_yaw), std::nullopt});

  const auto boxes = scene.bed_boxes();
  const double clearance = config.inflation();
  auto check = [&](const Waypoint& w) {
    if (!scene.bounds.contains_sphere(w.position, clearance))
      throw PlanningError("waypoint " + fmt_vec(w.position) + " is too close to the flight bounds");
    for (std::size_t b = 0; b < boxes.size(); ++b)
      if (boxes[b].distance_to(w.position) < clearance)
        throw PlanningError("waypoint " + fmt_vec(w.position) + " is too close to bed " +
                            std::to_string(b + 1));
  };
  check(out.front());

  for (int index : mission.beds) {
    const BedPose& pose = scene.bed(index).pose;
    const Vec3 n = pose.normal();
    Waypoint a{pose.center - n * config.standoff, wrap_angle(pose.yaw + std::numbers::pi / 2),
               CaptureTag{index, Side::A}};
    Waypoint b{pose.center + n * config.standoff, wrap_angle(pose.yaw - std::numbers::pi / 2),
               CaptureTag{index, Side::B}};
    check(a);
    check(b);
    out.push_back(a);
    out.push_back(b);
  }
  return out;
}

// ---------------------------------------------------------------- grid

OccupancyGrid::OccupancyGrid(const Aabb& bounds, std::vector<Aabb> obstacles, double resolution,
                             double inflation)
    : bounds_(bounds), obstacles_(std::move(obstacles)), resolution_(resolution),
      inflation_(inflation) {
  if (!(resolution > 0.0)) throw ConfigError("grid resolution must be positive");
  if (inflation < 0.0) throw ConfigError("grid inflation must be >= 0");
  const Vec3 ext = bounds.hi - bounds.lo;
  if (!(ext.x >= 0.0 && ext.y >= 0.0 && ext.z >= 0.0)) throw ConfigError("grid bounds are empty");
  nx_ = static_cast<int>(std::floor(ext.x / resolution + kEps)) + 1;
  ny_ = static_cast<int>(std::floor(ext.y / resolution + kEps)) + 1;
  nz_ = static_cast<int>(std::floor(ext.z / resolution + kEps)) + 1;
  free_.assign(static_cast<std::size_t>(node_count()), 0);
  for (int n = 0; n < node_count(); ++n) free_[static_cast<std::size_t>(n)] = point_free(position(n));
}

OccupancyGrid::OccupancyGrid(const SceneSpec& scene, const PlannerConfig& config)
    : OccupancyGrid(scene.bounds, scene.bed_boxes(), config.grid_resolution, config.inflation()) {}

Vec3 OccupancyGrid::position(int node) const {
  const int i = node % nx_;
  const int j = (node / nx_) % ny_;
  const int k = node / (nx_ * ny_);
  return {bounds_.lo.x + i * resolution_, bounds_.lo.y + j * resolution_,
          bounds_.lo.z + k * resolution_};
}

bool OccupancyGrid::point_free(const Vec3& p) const {
  // tiny tolerance so lattice nodes exactly at the clearance limit stay free
  if (!bounds_.contains_sphere(p, inflation_ - kEps)) return false;
  for (const auto& box : obstacles_)
    if (box.distance_to(p) < inflation_ - kEps) return false;
  return true;
}

bool OccupancyGrid::segment_free(const Vec3& a, const Vec3& b) const {
  const double len = distance(a, b);
  const int steps = std::max(1, static_cast<int>(std::ceil(len / kSegmentStep)));
  for (int s = 0; s <= steps; ++s) {
    if (!point_free(a + (b - a) * (static_cast<double>(s) / steps))) return false;
  }
  return true;
}

std::optional<int> OccupancyGrid::node_at(const Vec3& p) const {
  const double fi = (p.x - bounds_.lo.x) / resolution_;
  const double fj = (p.y - bounds_.lo.y) / resolution_;
  const double fk = (p.z - bounds_.lo.z) / resolution_;
  const double ri = std::round(fi), rj = std::round(fj), rk = std::round(fk);
  if (std::abs(fi - ri) * resolution_ > kEps || std::abs(fj - rj) * resolution_ > kEps ||
      std::abs(fk - rk) * resolution_ > kEps)
    return std::nullopt;
  const int i = static_cast<int>(ri), j = static_cast<int>(rj), k = static_cast<int>(rk);
  if (i < 0 || j < 0 || k < 0 || i >= nx_ || j >= ny_ || k >= nz_) return std::nullopt;
  return index(i, j, k);
}

// ---------------------------------------------------------------- roadmap

Roadmap::Roadmap(const std::vector<Waypoint>& waypoints, const OccupancyGrid& grid)
    : grid_(&grid), costs_(waypoints.size()) {
  const int base = grid.node_count();
  const std::size_t n = waypoints.size();

  // grid node -> virtual neighbours, virtual node -> grid neighbours
  std::vector<std::vector<std::pair<int, double>>> grid_links;
  std::vector<int> linked_grid_nodes;

  for (std::size_t w = 0; w < n; ++w) {
    const Vec3 p = waypoints[w].position;
    waypoint_pos_.push_back(p);
    if (auto node = grid.node_at(p); node && grid.free(*node)) {
      waypoint_node_.push_back(*node);
      continue;
    }
    const int vid = base + static_cast<int>(extra_edges_.size());
    extra_edges_.emplace_back();
    waypoint_node_.push_back(vid);
    const double r = grid.resolution();
    const int i0 = static_cast<int>(std::floor((p.x - grid.position(0).x) / r));
    const int j0 = static_cast<int>(std::floor((p.y - grid.position(0).y) / r));
    const int k0 = static_cast<int>(std::floor((p.z - grid.position(0).z) / r));
    for (int di = 0; di <= 1; ++di)
      for (int dj = 0; dj <= 1; ++dj)
        for (int dk = 0; dk <= 1; ++dk) {
          const int i = i0 + di, j = j0 + dj, k = k0 + dk;
          if (i < 0 || j < 0 || k < 0 || i >= grid.nx() || j >= grid.ny() || k >= grid.nz())
            continue;
          const int g = grid.index(i, j, k);
          if (!grid.free(g) || !grid.segment_free(p, grid.position(g))) continue;
          extra_edges_.back().push_back({g, distance(p, grid.position(g))});
        }
    if (extra_edges_.back().empty())
      throw PlanningError("waypoint " + fmt_vec(p) + " has no free lattice neighbour");
  }

  // reverse links from grid nodes to virtual nodes
  std::vector<std::vector<std::pair<int, double>>> reverse(extra_edges_.size());
  struct Link { int grid; int vid; double cost; };
  std::vector<Link> links;
  for (std::size_t v = 0; v < extra_edges_.size(); ++v)
    for (auto [g, c] : extra_edges_[v]) links.push_back({g, base + static_cast<int>(v), c});
  std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) { return a.grid < b.grid; });

  const int total = base + static_cast<int>(extra_edges_.size());
  const double r = grid.resolution();
  struct Offset { int di, dj, dk; double cost; };
  std::vector<Offset> offsets;
  for (int dk = -1; dk <= 1; ++dk)
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        if (di == 0 && dj == 0 && dk == 0) continue;
        offsets.push_back({di, dj, dk, r * std::sqrt(double(di * di + dj * dj + dk * dk))});
      }

  parents_.resize(n);
  std::vector<double> dist(static_cast<std::size_t>(total));
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kInf);
    auto& parent = parents_[s];
    parent.assign(static_cast<std::size_t>(total), -1);
    std::vector<char> is_target(static_cast<std::size_t>(total), 0);
    std::size_t targets_left = 0;
    for (std::size_t t = 0; t < n; ++t) {
      auto& flag = is_target[static_cast<std::size_t>(waypoint_node_[t])];
      if (!flag) { flag = 1; ++targets_left; }
    }

    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    const int src = waypoint_node_[s];
    dist[static_cast<std::size_t>(src)] = 0.0;
    heap.push({0.0, src});
    auto relax = [&](int from, int to, double c) {
      const double nd = dist[static_cast<std::size_t>(from)] + c;
      if (nd < dist[static_cast<std::size_t>(to)]) {
        dist[static_cast<std::size_t>(to)] = nd;
        parent[static_cast<std::size_t>(to)] = from;
        heap.push({nd, to});
      }
    };
    while (!heap.empty() && targets_left > 0) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[static_cast<std::size_t>(u)]) continue;
      if (is_target[static_cast<std::size_t>(u)] == 1) {
        is_target[static_cast<std::size_t>(u)] = 2;
        --targets_left;
      }
      if (u >= base) {
        for (auto [g, c] : extra_edges_[static_cast<std::size_t>(u - base)]) relax(u, g, c);
        continue;
      }
      const int i = u % grid.nx();
      const int j = (u / grid.nx()) % grid.ny();
      const int k = u / (grid.nx() * grid.ny());
      for (const auto& o : offsets) {
        const int ii = i + o.di, jj = j + o.dj, kk = k + o.dk;
        if (ii < 0 || jj < 0 || kk < 0 || ii >= grid.nx() || jj >= grid.ny() || kk >= grid.nz())
          continue;
        const int v = grid.index(ii, jj, kk);
        if (grid.free(v)) relax(u, v, o.cost);
      }
      auto it = std::lower_bound(links.begin(), links.end(), u,
                                 [](const Link& l, int g) { return l.grid < g; });
      for (; it != links.end() && it->grid == u; ++it) relax(u, it->vid, it->cost);
    }

    for (std::size_t t = 0; t < n; ++t) {
      const double d = dist[static_cast<std::size_t>(waypoint_node_[t])];
      if (!std::isfinite(d))
        throw PlanningError("no collision-free path from " + fmt_vec(waypoint_pos_[s]) + " to " +
                            fmt_vec(waypoint_pos_[t]));
      costs_.at(s, t) = d;
    }
  }
  // Dijkstra is exact up to rounding; force exact symmetry
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const double m = std::min(costs_(a, b), costs_(b, a));
      costs_.at(a, b) = costs_.at(b, a) = m;
    }
}

Vec3 Roadmap::node_position(int node) const {
  if (node < grid_->node_count()) return grid_->position(node);
  for (std::size_t w = 0; w < waypoint_node_.size(); ++w)
    if (waypoint_node_[w] == node) return waypoint_pos_[w];
  throw DomainError("unknown roadmap node");
}

std::vector<Vec3> Roadmap::path(std::size_t from, std::size_t to) const {
  if (from >= waypoint_pos_.size() || to >= waypoint_pos_.size())
    throw DomainError("roadmap waypoint index out of range");
  const auto& parent = parents_[from];
  std::vector<Vec3> out;
  int node = waypoint_node_[to];
  const int src = waypoint_node_[from];
  out.push_back(waypoint_pos_[to]);
  while (node != src) {
    node = parent[static_cast<std::size_t>(node)];
    if (node < 0) throw PlanningError("roadmap path is broken");
    out.push_back(node == src ? waypoint_pos_[from] : node_position(node));
  }
  if (out.size() == 1) out.push_back(waypoint_pos_[from]);
  std::reverse(out.begin(), out.end());
  return out;
}

CostMatrix cost_matrix(const std::vector<Waypoint>& waypoints, const SceneSpec& scene,
                       const PlannerConfig& config) {
  const OccupancyGrid grid(scene, config);
  return Roadmap(waypoints, grid).costs();
}

std::vector<Vec3> shortcut_path(const std::vector<Vec3>& polyline, const OccupancyGrid& grid) {
  if (polyline.size() <= 2) return polyline;
  std::vector<Vec3> out{polyline.front()};
  std::size_t anchor = 0;
  const std::size_t last = polyline.size() - 1;
  while (anchor < last) {
    std::size_t k = anchor + 1;
    while (k + 1 <= last && grid.segment_free(polyline[anchor], polyline[k + 1])) ++k;
    out.push_back(polyline[k]);
    anchor = k;
  }
  return out;
}

// ---------------------------------------------------------------- route

double route_cost(const CostMatrix& costs, std::span<const std::size_t> order) {
  double total = 0.0;
  for (std::size_t i = 1; i < order.size(); ++i) total += costs(order[i - 1], order[i]);
  return total;
}

std::vector<std::size_t> nearest_neighbor_route(const CostMatrix& costs, std::size_t start) {
  if (costs.n == 0) return {};
  if (start >= costs.n) throw DomainError("route start out of range");
  std::vector<char> used(costs.n, 0);
  std::vector<std::size_t> order{start};
  used[start] = 1;
  while (order.size() < costs.n) {
    const std::size_t cur = order.back();
    std::size_t best = costs.n;
    for (std::size_t j = 0; j < costs.n; ++j)
      if (!used[j] && (best == costs.n || costs(cur, j) < costs(cur, best))) best = j;
    used[best] = 1;
    order.push_back(best);
  }
  return order;
}

namespace {

double two_opt_delta(const CostMatrix& c, const std::vector<std::size_t>& o, std::size_t i,
                     std::size_t j) {
  double d = c(o[i - 1], o[j]) - c(o[i - 1], o[i]);
  if (j + 1 < o.size()) d += c(o[i], o[j + 1]) - c(o[j], o[j + 1]);
  return d;
}

bool improve_two_opt(const CostMatrix& c, std::vector<std::size_t>& o) {
  double best = -kEps;
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 1; i + 1 < o.size(); ++i)
    for (std::size_t j = i + 1; j < o.size(); ++j) {
      const double d = two_opt_delta(c, o, i, j);
      if (d < best) { best = d; bi = i; bj = j; }
    }
  if (bi == 0) return false;
  std::reverse(o.begin() + static_cast<std::ptrdiff_t>(bi), o.begin() + static_cast<std::ptrdiff_t>(bj) + 1);
  return true;
}

// Moves a run of 1..3 consecutive stops (optionally reversed) elsewhere.
bool improve_or_opt(const CostMatrix& c, std::vector<std::size_t>& o) {
  const double current = route_cost(c, o);
  double best = current - kEps;
  std::vector<std::size_t> best_order;
  std::vector<std::size_t> rest, seg, cand;
  for (std::size_t len = 1; len <= 3; ++len)
    for (std::size_t i = 1; i + len <= o.size(); ++i) {
      seg.assign(o.begin() + static_cast<std::ptrdiff_t>(i), o.begin() + static_cast<std::ptrdiff_t>(i + len));
      rest.assign(o.begin(), o.begin() + static_cast<std::ptrdiff_t>(i));
      rest.insert(rest.end(), o.begin() + static_cast<std::ptrdiff_t>(i + len), o.end());
      for (int rev = 0; rev < 2; ++rev) {
        if (rev == 1) {
          if (len == 1) break;
          std::reverse(seg.begin(), seg.end());
        }
        for (std::size_t pos = 1; pos <= rest.size(); ++pos) {
          if (pos == i && rev == 0) continue;
          cand.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(pos));
          cand.insert(cand.end(), seg.begin(), seg.end());
          cand.insert(cand.end(), rest.begin() + static_cast<std::ptrdiff_t>(pos), rest.end());
          const double cost = route_cost(c, cand);
          if (cost < best) { best = cost; best_order = cand; }
        }
      }
    }
  if (best_order.empty()) return false;
  o = std::move(best_order);
  return true;
}

}  // namespace

std::vector<std::size_t> solve_route(const CostMatrix& costs, std::size_t start) {
  auto order = nearest_neighbor_route(costs, start);
  while (improve_two_opt(costs, order) || improve_or_opt(costs, order)) {
  }
  return order;
}

bool is_two_opt_optimal(const CostMatrix& costs, std::span<const std::size_t> order) {
  const std::vector<std::size_t> o(order.begin(), order.end());
  for (std::size_t i = 1; i + 1 < o.size(); ++i)
    for (std::size_t j = i + 1; j < o.size(); ++j)
      if (two_opt_delta(costs, o, i, j) < -kEps) return false;
  return true;
}

// ---------------------------------------------------------------- path

std::vector<double> chebyshev_nodes(int n) {
  if (n < 1) throw DomainError("chebyshev_nodes: n must be >= 1");
  std::vector<double> u(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k)
    u[static_cast<std::size_t>(k - 1)] =
        0.5 * (1.0 - std::cos(std::numbers::pi * (2.0 * k - 1.0) / (2.0 * n)));
  return u;
}

DensePath chebyshev_path(const std::vector<Waypoint>& ordered,
                         const std::vector<std::vector<Vec3>>& legs, int n) {
  if (ordered.empty()) return {};
  if (legs.size() + 1 != ordered.size())
    throw DomainError("chebyshev_path: need one leg per consecutive waypoint pair");
  const auto u = chebyshev_nodes(n);

  DensePath out;
  out.push_back({ordered[0].position, ordered[0].yaw, true, ordered[0].tag});
  for (std::size_t l = 0; l < legs.size(); ++l) {
    const auto& poly = legs[l];
    const Waypoint& from = ordered[l];
    const Waypoint& to = ordered[l + 1];
    if (poly.size() < 2 || distance(poly.front(), from.position) > 1e-6 ||
        distance(poly.back(), to.position) > 1e-6)
      throw DomainError("chebyshev_path: leg does not join its waypoints");

    std::vector<double> cum{0.0};
    for (std::size_t i = 1; i < poly.size(); ++i) cum.push_back(cum.back() + distance(poly[i - 1], poly[i]));
    const double total = cum.back();
    const double dyaw = wrap_angle(to.yaw - from.yaw);

    if (total < 1e-12) {
      auto& prev = out.back();
      if (!prev.capture) prev.capture = to.tag;
      continue;
    }

    struct Stop { double s; bool corner; };
    std::vector<Stop> stops;
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) stops.push_back({cum[i], true});
    for (double uk : u) stops.push_back({uk * total, false});
    std::sort(stops.begin(), stops.end(), [](const Stop& a, const Stop& b) {
      return a.s < b.s || (a.s == b.s && a.corner && !b.corner);
    });

    auto point_at = [&](double s) {
      std::size_t seg = 1;
      while (seg + 1 < cum.size() && cum[seg] < s) ++seg;
      const double len = cum[seg] - cum[seg - 1];
      const double f = len > 0.0 ? (s - cum[seg - 1]) / len : 0.0;
      return poly[seg - 1] + (poly[seg] - poly[seg - 1]) * f;
    };

    double last_s = 0.0;
    bool emitted = false;
    for (const auto& st : stops) {
      if (total - st.s < 1e-9) continue;
      if (st.s - last_s < 1e-9) {
        // coincides with the previous sample; a corner must stay a stop
        if (st.corner && emitted) {
          out.back().position = point_at(st.s);
          out.back().stop = true;
        }
        continue;
      }
      out.push_back({point_at(st.s), wrap_angle(from.yaw + dyaw * st.s / total), st.corner, std::nullopt});
      last_s = st.s;
      emitted = true;
    }
    out.push_back({to.position, to.yaw, true, to.tag});
  }
  return out;
}

DensePath chebyshev_path(const std::vector<Waypoint>& ordered, int n) {
  std::vector<std::vector<Vec3>> legs;
  for (std::size_t i = 1; i < ordered.size(); ++i)
    legs.push_back({ordered[i - 1].position, ordered[i].position});
  return chebyshev_path(ordered, legs, n);
}

// ---------------------------------------------------------------- timing

double trapezoid_duration(double length, double v_max, double a_max) {
  if (length <= 0.0) return 0.0;
  const double ramp = v_max * v_max / a_max;  // distance spent accelerating plus braking
  if (length >= ramp) return length / v_max + v_max / a_max;
  return 2.0 * std::sqrt(length / a_max);
}

namespace {

// Time and speed at arc length s along a rest-to-rest move of `length`.
std::pair<double, double> trapezoid_at(double s, double length, double v_max, double a_max) {
  const double ramp = v_max * v_max / (2.0 * a_max);
  const double peak = length >= 2.0 * ramp ? v_max : std::sqrt(a_max * length);
  const double d_acc = peak * peak / (2.0 * a_max);
  const double t_acc = peak / a_max;
  if (s <= d_acc) {
    const double v = std::sqrt(2.0 * a_max * s);
    return {v / a_max, v};
  }
  const double d_cruise = length - 2.0 * d_acc;
  if (s <= d_acc + d_cruise) return {t_acc + (s - d_acc) / peak, peak};
  const double rem = std::max(0.0, length - s);
  const double v = std::sqrt(2.0 * a_max * rem);
  return {2.0 * t_acc + d_cruise / peak - v / a_max, v};
}

}  // namespace

Trajectory time_parameterize(const DensePath& path, double v_max, double a_max, double dwell) {
  if (!(v_max > 0.0)) throw DomainError("time_parameterize: v_max must be positive");
  if (!(a_max > 0.0)) throw DomainError("time_parameterize: a_max must be positive");
  if (dwell < 0.0) throw DomainError("time_parameterize: dwell must be >= 0");

  Trajectory tr;
  if (path.empty()) return tr;
  double t = 0.0;

  auto arrive = [&](const PathPoint& p) {
    if (!p.capture) return;
    tr.capture_windows.push_back({t, t + dwell, *p.capture, p.position, p.yaw});
    if (dwell > 0.0) {
      t += dwell;
      tr.samples.push_back({t, p.position, p.yaw, {}});
    }
  };

  tr.samples.push_back({0.0, path[0].position, path[0].yaw, {}});
  arrive(path[0]);

  std::size_t p = 0;
  while (p + 1 < path.size()) {
    std::size_t q = p + 1;
    while (q + 1 < path.size() && !path[q].stop) ++q;
    const Vec3 a = path[p].position;
    const Vec3 b = path[q].position;
    const double len = distance(a, b);
    const Vec3 dir = len > 0.0 ? (b - a) * (1.0 / len) : Vec3{};
    const double t0 = t;
    for (std::size_t i = p + 1; i < q; ++i) {
      const double s = std::clamp(dot(path[i].position - a, dir), 0.0, len);
      const auto [dt, v] = trapezoid_at(s, len, v_max, a_max);
      tr.samples.push_back({t0 + dt, path[i].position, path[i].yaw, dir * v});
    }
    t = t0 + trapezoid_duration(len, v_max, a_max);
    if (len > 0.0) tr.samples.push_back({t, b, path[q].yaw, {}});
    arrive(path[q]);
    p = q;
  }

  for (std::size_t i = 1; i < tr.samples.size(); ++i)
    tr.length += distance(tr.samples[i - 1].position, tr.samples[i].position);
  tr.duration = t;
  return tr;
}

// ---------------------------------------------------------------- flight

FlightResult simulate_flight(const Trajectory& trajectory, const Aabb& bounds,
                             std::span<const Aabb> obstacles, double drone_radius) {
  FlightResult r;
  r.t_m = trajectory.duration;
  r.d_m = trajectory.length;
  const auto& s = trajectory.samples;
  if (s.empty()) return r;

  auto colliding = [&](const Vec3& p) {
    if (!bounds.contains_sphere(p, drone_radius)) return true;
    for (const auto& box : obstacles)
      if (box.distance_to(p) < drone_radius) return true;
    return false;
  };

  bool prev = colliding(s[0].position);
  if (prev) ++r.collisions;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const Vec3 a = s[i - 1].position, b = s[i].position;
    const int steps = std::max(1, static_cast<int>(std::ceil(distance(a, b) / kSweepStep)));
    for (int k = 1; k <= steps; ++k) {
      const bool now = colliding(a + (b - a) * (static_cast<double>(k) / steps));
      if (now && !prev) ++r.collisions;
      prev = now;
    }
  }
  return r;
}

FlightResult simulate_flight(const Trajectory& trajectory, const SceneSpec& scene,
                             const PlannerConfig& config) {
  const auto boxes = scene.bed_boxes();
  return simulate_flight(trajectory, scene.bounds, boxes, config.drone_radius);
}

FlightPlan plan_flight(const Mission& mission, const SceneSpec& scene, const PlannerConfig& config) {
  validate(config);
  FlightPlan plan;
  plan.waypoints = build_waypoints(mission, scene, config);
  const OccupancyGrid grid(scene, config);
  const Roadmap roadmap(plan.waypoints, grid);
  plan.order = solve_route(roadmap.costs(), 0);
  plan.route_cost = route_cost(roadmap.costs(), plan.order);
  for (std::size_t i = 0; i < plan.order.size(); ++i) {
    plan.ordered.push_back(plan.waypoints[plan.order[i]]);
    if (i > 0) plan.legs.push_back(shortcut_path(roadmap.path(plan.order[i - 1], plan.order[i]), grid));
  }
  plan.path = chebyshev_path(plan.ordered, plan.legs, config.nodes_per_segment);
  plan.trajectory = time_parameterize(plan.path, config.v_max, config.a_max, config.dwell);
  return plan;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "t,x,y,z,yaw\n";
  char buf[160];
  for (const auto& s : trajectory.samples) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%.6f\n", s.t, s.position.x, s.position.y,
                  s.position.z, s.yaw);
    out << buf;
  }
}

}  // namespace orchard
