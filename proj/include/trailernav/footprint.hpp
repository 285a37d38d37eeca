#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>
#include <vector>

#include "trailernav/geometry.hpp"
#include "trailernav/grid.hpp"

namespace trailernav {

/// Axis-aligned box in the vehicle frame, centered laterally, shifted by
/// offset_x along the heading axis.
struct RectangleFootprint {
  double length = 1.0;
  double width = 1.0;
  double offset_x = 0.0;
};

struct FootprintCircle {
  double offset_x = 0.0;
  double radius = 0.5;
};

/// Two-circle vehicle approximation; offsets are along the body x axis.
struct TwoCirclesFootprint {
  FootprintCircle circle_1;
  FootprintCircle circle_2;
};

using Footprint = std::variant<RectangleFootprint, TwoCirclesFootprint>;

inline void validate(const Footprint& fp) {
  if (const auto* r = std::get_if<RectangleFootprint>(&fp)) {
    if (r->length <= 0.0 || r->width <= 0.0)
      throw std::invalid_argument("rectangle footprint dimensions must be > 0");
  } else {
    const auto& tc = std::get<TwoCirclesFootprint>(fp);
    if (tc.circle_1.radius <= 0.0 || tc.circle_2.radius <= 0.0)
      throw std::invalid_argument("footprint circle radii must be > 0");
  }
}

/// Membership of a world point in the footprint placed at `pose`. Boundaries
/// are inclusive.
inline bool footprint_contains(const Footprint& fp, const Pose2D& pose, Vec2 point) {
  if (const auto* r = std::get_if<RectangleFootprint>(&fp)) {
    const Vec2 local = pose.inverse_transform(point);
    return std::abs(local.x - r->offset_x) <= 0.5 * r->length &&
           std::abs(local.y) <= 0.5 * r->width;
  }
  const auto& tc = std::get<TwoCirclesFootprint>(fp);
  const Vec2 h = unit_vector(pose.theta);
  for (const FootprintCircle& c : {tc.circle_1, tc.circle_2}) {
    const Vec2 center = pose.position() + h * c.offset_x;
    if ((point - center).squared_norm() <= c.radius * c.radius) return true;
  }
  return false;
}

/// Radius of the smallest circle about the body origin enclosing the footprint.
inline double footprint_circumradius(const Footprint& fp) {
  if (const auto* r = std::get_if<RectangleFootprint>(&fp)) {
    const double fx = std::max(std::abs(r->offset_x + 0.5 * r->length),
                               std::abs(r->offset_x - 0.5 * r->length));
    return std::hypot(fx, 0.5 * r->width);
  }
  const auto& tc = std::get<TwoCirclesFootprint>(fp);
  return std::max(std::abs(tc.circle_1.offset_x) + tc.circle_1.radius,
                  std::abs(tc.circle_2.offset_x) + tc.circle_2.radius);
}

/// Two circles that jointly enclose the footprint. Rectangles are split
/// lengthwise into two equal boxes, each wrapped by its circumcircle; a
/// two-circle footprint is returned as-is. Useful for cheap clearance
/// queries against point obstacles.
inline TwoCirclesFootprint cover_circles(const Footprint& fp) {
  if (const auto* r = std::get_if<RectangleFootprint>(&fp)) {
    const double q = 0.25 * r->length;
    const double radius = std::hypot(q, 0.5 * r->width);
    return {{r->offset_x - q, radius}, {r->offset_x + q, radius}};
  }
  return std::get<TwoCirclesFootprint>(fp);
}

inline Footprint inflated(const Footprint& fp, double margin) {
  if (const auto* r = std::get_if<RectangleFootprint>(&fp))
    return RectangleFootprint{r->length + 2.0 * margin, r->width + 2.0 * margin, r->offset_x};
  auto tc = std::get<TwoCirclesFootprint>(fp);
  tc.circle_1.radius += margin;
  tc.circle_2.radius += margin;
  return tc;
}

/// All in-bounds cells whose centers lie inside the footprint at `pose`,
/// in row-major (y, then x) order.
inline std::vector<CellIndex> footprint_cells(const OccupancyGrid& grid, const Pose2D& pose,
                                              const Footprint& fp) {
  const double r = footprint_circumradius(fp);
  const CellIndex lo = grid.cell_at({pose.x - r, pose.y - r});
  const CellIndex hi = grid.cell_at({pose.x + r, pose.y + r});
  std::vector<CellIndex> out;
  for (int cy = std::max(lo.y, 0); cy <= std::min(hi.y, grid.height() - 1); ++cy)
    for (int cx = std::max(lo.x, 0); cx <= std::min(hi.x, grid.width() - 1); ++cx)
      if (footprint_contains(fp, pose, grid.cell_center({cx, cy}))) out.push_back({cx, cy});
  return out;
}

/// Distance from a world point to the footprint boundary at `pose`; zero if
/// the point lies inside.
inline double footprint_distance(const Footprint& fp, const Pose2D& pose, Vec2 point) {
  if (const auto* r = std::get_if<RectangleFootprint>(&fp)) {
    const Vec2 local = pose.inverse_transform(point);
    const double dx = std::max(std::abs(local.x - r->offset_x) - 0.5 * r->length, 0.0);
    const double dy = std::max(std::abs(local.y) - 0.5 * r->width, 0.0);
    return std::hypot(dx, dy);
  }
  const auto& tc = std::get<TwoCirclesFootprint>(fp);
  const Vec2 h = unit_vector(pose.theta);
  double best = std::numeric_limits<double>::infinity();
  for (const FootprintCircle& c : {tc.circle_1, tc.circle_2}) {
    const Vec2 center = pose.position() + h * c.offset_x;
    best = std::min(best, std::max((point - center).norm() - c.radius, 0.0));
  }
  return best;
}

/// Smallest footprint_distance to any occupied cell center within `range` of
/// the footprint boundary; +infinity when no occupied cell is that close.
inline double footprint_clearance(const OccupancyGrid& grid, const Pose2D& pose,
                                  const Footprint& fp, double range) {
  const double r = footprint_circumradius(fp) + range;
  const CellIndex lo = grid.cell_at({pose.x - r, pose.y - r});
  const CellIndex hi = grid.cell_at({pose.x + r, pose.y + r});
  double best = std::numeric_limits<double>::infinity();
  for (int cy = std::max(lo.y, 0); cy <= std::min(hi.y, grid.height() - 1); ++cy)
    for (int cx = std::max(lo.x, 0); cx <= std::min(hi.x, grid.width() - 1); ++cx) {
      const CellIndex c{cx, cy};
      if (grid.occupied(c))
        best = std::min(best, footprint_distance(fp, pose, grid.cell_center(c)));
    }
  return best;
}

/// True iff no cell covered by the footprint is occupied. Cells outside the
/// grid are excluded, matching footprint_cells.
inline bool collision_free(const OccupancyGrid& grid, const Pose2D& pose, const Footprint& fp) {
  const double r = footprint_circumradius(fp);
  const CellIndex lo = grid.cell_at({pose.x - r, pose.y - r});
  const CellIndex hi = grid.cell_at({pose.x + r, pose.y + r});
  for (int cy = std::max(lo.y, 0); cy <= std::min(hi.y, grid.height() - 1); ++cy)
    for (int cx = std::max(lo.x, 0); cx <= std::min(hi.x, grid.width() - 1); ++cx) {
      const CellIndex c{cx, cy};
      if (grid.occupied(c) && footprint_contains(fp, pose, grid.cell_center(c))) return false;
    }
  return true;
}

}  // namespace trailernav
