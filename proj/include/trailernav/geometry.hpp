#pragma once

#include <cmath>

namespace trailernav {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps an angle into the half-open interval [-pi, pi) using the floored
/// (non-negative) modulo, so that normalize_angle(pi) == -pi.
inline double normalize_angle(double a) {
  double r = std::fmod(a + kPi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r - kPi;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
  /// Rotates the vector by `angle` radians (counterclockwise).
  Vec2 rotated(double angle) const {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
  }
};

inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Planar pose. theta is kept in [-pi, pi) by every function in this library
/// that produces poses; plain aggregate construction does not re-normalize.
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
  Pose2D normalized() const { return {x, y, normalize_angle(theta)}; }
  /// Maps a point from the pose's local frame into the world frame.
  Vec2 transform(const Vec2& local) const {
    const Vec2 w = local.rotated(theta);
    return {x + w.x, y + w.y};
  }
  /// Maps a world point into the pose's local frame.
  Vec2 inverse_transform(const Vec2& world) const {
    return Vec2{world.x - x, world.y - y}.rotated(-theta);
  }
};

inline double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance(const Pose2D& a, const Pose2D& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Absolute heading difference |a - b| after wrapping, in [0, pi].
inline double heading_distance(double a, double b) {
  return std::abs(normalize_angle(a - b));
}

}  // namespace trailernav
