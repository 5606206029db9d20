#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace orchard {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  return n > 0.0 ? a * (1.0 / n) : a;
}

inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

/// Unit heading vector in the horizontal plane for a yaw angle.
inline Vec3 heading(double yaw) { return {std::cos(yaw), std::sin(yaw), 0.0}; }

/// Axis-aligned box.
struct Aabb {
  Vec3 lo;
  Vec3 hi;

  bool contains(const Vec3& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
  }

  /// Euclidean distance from p to the box (0 inside).
  double distance_to(const Vec3& p) const {
    const double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
    const double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
    const double dz = std::max({lo.z - p.z, 0.0, p.z - hi.z});
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  }

  /// True when a sphere of `radius` at p lies entirely inside the box.
  bool contains_sphere(const Vec3& p, double radius) const {
    return p.x - radius >= lo.x && p.x + radius <= hi.x && p.y - radius >= lo.y &&
           p.y + radius <= hi.y && p.z - radius >= lo.z && p.z + radius <= hi.z;
  }

  bool overlaps(const Aabb& o) const {
    return lo.x < o.hi.x && o.lo.x < hi.x && lo.y < o.hi.y && o.lo.y < hi.y && lo.z < o.hi.z &&
           o.lo.z < hi.z;
  }

  bool contains_box(const Aabb& o) const { return contains(o.lo) && contains(o.hi); }

  Aabb shrunk(double d) const { return {lo + Vec3{d, d, d}, hi - Vec3{d, d, d}}; }
};

}  // namespace orchard
