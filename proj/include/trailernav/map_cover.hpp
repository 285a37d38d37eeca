#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "trailernav/geometry.hpp"
#include "trailernav/grid.hpp"
#include "trailernav/text_io.hpp"

namespace trailernav {

/// Axis-aligned rectangle of cells, both corners inclusive.
struct CoverRect {
  CellIndex min;
  CellIndex max;

  bool contains(CellIndex c) const {
    return c.x >= min.x && c.x <= max.x && c.y >= min.y && c.y <= max.y;
  }
  std::int64_t cell_count() const {
    return static_cast<std::int64_t>(max.x - min.x + 1) * (max.y - min.y + 1);
  }
};

/// Disjoint rectangle decomposition of a grid's free space, used as a
/// whitelist: sensed points landing inside it sit in supposedly free space
/// and are therefore novel obstacles, while points outside belong to the
/// known static structure and can be dropped.
class MapCover {
 public:
  MapCover(double resolution, Vec2 origin, int width, int height)
      : resolution_(resolution), origin_(origin), width_(width), height_(height) {
    if (!(resolution > 0.0) || width <= 0 || height <= 0)
      throw std::invalid_argument("MapCover: non-positive dimensions");
    row_buckets_.resize(static_cast<std::size_t>(height));
  }

  double resolution() const { return resolution_; }
  Vec2 origin() const { return origin_; }
  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<CoverRect>& rects() const { return rects_; }

  void add_rect(const CoverRect& r) {
    if (r.min.x < 0 || r.min.y < 0 || r.max.x >= width_ || r.max.y >= height_ ||
        r.min.x > r.max.x || r.min.y > r.max.y)
      throw std::invalid_argument("MapCover: rect outside grid or inverted");
    const auto idx = static_cast<std::int32_t>(rects_.size());
    rects_.push_back(r);
    for (int y = r.min.y; y <= r.max.y; ++y)
      row_buckets_[static_cast<std::size_t>(y)].push_back(idx);
  }

  bool covers_cell(CellIndex c) const {
    if (c.x < 0 || c.x >= width_ || c.y < 0 || c.y >= height_) return false;
    for (const std::int32_t idx : row_buckets_[static_cast<std::size_t>(c.y)])
      if (rects_[idx].contains(c)) return true;
    return false;
  }

  bool covers_point(Vec2 p) const {
    const double fx = std::floor((p.x - origin_.x) / resolution_);
    const double fy = std::floor((p.y - origin_.y) / resolution_);
    if (fx < 0 || fx >= width_ || fy < 0 || fy >= height_) return false;
    return covers_cell({static_cast<int>(fx), static_cast<int>(fy)});
  }

  std::int64_t covered_cell_count() const {
    std::int64_t n = 0;
    for (const CoverRect& r : rects_) n += r.cell_count();
    return n;
  }

 private:
  double resolution_;
  Vec2 origin_;
  int width_;
  int height_;
  std::vector<CoverRect> rects_;
  std::vector<std::vector<std::int32_t>> row_buckets_;
};

/// Greedy scan decomposition. Rows are visited bottom-up and left-to-right;
/// each uncovered free cell seeds a rectangle that grows rightwards over
/// uncovered free cells, then upwards while the full column span stays free.
/// The scan order makes the result deterministic and the rectangles disjoint.
inline MapCover build_cover(const OccupancyGrid& grid) {
  MapCover cover(grid.resolution(), grid.origin(), grid.width(), grid.height());
  const int W = grid.width(), H = grid.height();
  std::vector<char> covered(static_cast<std::size_t>(W) * H, 0);
  const auto is_covered = [&](int x, int y) {
    return covered[static_cast<std::size_t>(y) * W + x] != 0;
  };
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      if (grid.occupied({x, y}) || is_covered(x, y)) continue;
      int x1 = x;
      while (x1 + 1 < W && grid.free({x1 + 1, y}) && !is_covered(x1 + 1, y)) ++x1;
      int y1 = y;
      while (y1 + 1 < H) {
        bool row_free = true;
        for (int cx = x; cx <= x1; ++cx)
          if (grid.occupied({cx, y1 + 1})) {
            row_free = false;
            break;
          }
        if (!row_free) break;
        ++y1;
      }
      for (int cy = y; cy <= y1; ++cy)
        for (int cx = x; cx <= x1; ++cx) covered[static_cast<std::size_t>(cy) * W + cx] = 1;
      cover.add_rect({{x, y}, {x1, y1}});
    }
  }
  return cover;
}

inline bool covers_point(const MapCover& cover, const OccupancyGrid& grid, Vec2 p) {
  if (std::abs(grid.resolution() - cover.resolution()) > 1e-12 ||
      std::abs(grid.origin().x - cover.origin().x) > 1e-12 ||
      std::abs(grid.origin().y - cover.origin().y) > 1e-12 || grid.width() != cover.width() ||
      grid.height() != cover.height())
    throw std::invalid_argument("covers_point: cover was built for a different grid");
  return cover.covers_point(p);
}

/// Keeps exactly the points that fall inside the whitelist (known-free floor
/// space), original order preserved. Points on static structure or outside
/// the map are dropped; the survivors are the candidate novel obstacles.
inline std::vector<Vec2> filter_points(const MapCover& cover, const OccupancyGrid& grid,
                                       std::span<const Vec2> points) {
  std::vector<Vec2> out;
  for (const Vec2& p : points)
    if (covers_point(cover, grid, p)) out.push_back(p);
  return out;
}

inline std::string export_cover(const MapCover& cover) {
  std::string s = "cover v1\n";
  s += "resolution " + format_double(cover.resolution());
  s += " origin " + format_double(cover.origin().x) + " " + format_double(cover.origin().y);
  s += " size " + std::to_string(cover.width()) + " " + std::to_string(cover.height()) + "\n";
  s += "rects " + std::to_string(cover.rects().size()) + "\n";
  for (const CoverRect& r : cover.rects()) {
    s += "rect " + std::to_string(r.min.x) + " " + std::to_string(r.min.y) + " " +
         std::to_string(r.max.x) + " " + std::to_string(r.max.y) + "\n";
  }
  return s;
}

inline MapCover import_cover(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.size() < 2 || lines[0] != "cover v1")
    throw std::runtime_error("import_cover: missing 'cover v1' header");
  const std::vector<std::string> head = split_ws(lines[1]);
  if (head.size() != 8 || head[0] != "resolution" || head[2] != "origin" || head[5] != "size")
    throw std::runtime_error("import_cover: malformed geometry line");
  MapCover cover(parse_double(head[1]), {parse_double(head[3]), parse_double(head[4])},
                 static_cast<int>(parse_int(head[6])), static_cast<int>(parse_int(head[7])));
  if (lines.size() < 3) throw std::runtime_error("import_cover: missing rects line");
  const std::vector<std::string> rc = split_ws(lines[2]);
  if (rc.size() != 2 || rc[0] != "rects")
    throw std::runtime_error("import_cover: malformed rects line");
  const auto n = static_cast<std::size_t>(parse_int(rc[1]));
  if (lines.size() != 3 + n) throw std::runtime_error("import_cover: rect count mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<std::string> f = split_ws(lines[3 + i]);
    if (f.size() != 5 || f[0] != "rect")
      throw std::runtime_error("import_cover: malformed rect record");
    cover.add_rect({{static_cast<int>(parse_int(f[1])), static_cast<int>(parse_int(f[2]))},
                    {static_cast<int>(parse_int(f[3])), static_cast<int>(parse_int(f[4]))}});
  }
  return cover;
}

}  // namespace trailernav
