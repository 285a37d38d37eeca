#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trailernav/geometry.hpp"
#include "trailernav/text_io.hpp"

namespace trailernav {

struct CellIndex {
  int x = 0;
  int y = 0;
  bool operator==(const CellIndex&) const = default;
};

/// Binary occupancy grid. Cells are half-open squares: a point exactly on a
/// cell boundary belongs to the higher-index cell. Immutable in practice:
/// planner, tracker and simulator only ever read a fully built grid.
class OccupancyGrid {
 public:
  OccupancyGrid(double resolution, Vec2 origin, int width, int height)
      : resolution_(resolution),
        origin_(origin),
        width_(width),
        height_(height),
        cells_(static_cast<std::size_t>(width) * height, 0) {
    if (resolution <= 0.0) throw std::invalid_argument("grid resolution must be > 0");
    if (width < 1 || height < 1) throw std::invalid_argument("grid size must be >= 1x1");
  }

  double resolution() const { return resolution_; }
  const Vec2& origin() const { return origin_; }
  int width() const { return width_; }
  int height() const { return height_; }

  bool in_bounds(CellIndex c) const {
    return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
  }

  bool occupied(CellIndex c) const { return cells_[index_of(c)] != 0; }
  bool free(CellIndex c) const { return cells_[index_of(c)] == 0; }

  /// Out-of-bounds cells read as free; occupancy is only defined on the map.
  bool occupied_at(CellIndex c) const { return in_bounds(c) && cells_[index_of(c)] != 0; }

  void set_occupied(CellIndex c, bool value = true) { cells_[index_of(c)] = value ? 1 : 0; }

  /// Marks every cell whose square overlaps the world-rectangle
  /// [x0,x1] x [y0,y1] with positive area as occupied.
  void fill_rect(double x0, double y0, double x1, double y1) { paint_rect(x0, y0, x1, y1, 1); }

  /// Same cell selection as fill_rect, marking cells free instead.
  void clear_rect(double x0, double y0, double x1, double y1) { paint_rect(x0, y0, x1, y1, 0); }

  /// Floor division by resolution; never clamps. The index may be out of
  /// bounds, see in_bounds().
  CellIndex cell_at(Vec2 p) const {
    return {static_cast<int>(std::floor((p.x - origin_.x) / resolution_)),
            static_cast<int>(std::floor((p.y - origin_.y) / resolution_))};
  }

  std::optional<CellIndex> world_to_cell(Vec2 p) const {
    const CellIndex c = cell_at(p);
    if (!in_bounds(c)) return std::nullopt;
    return c;
  }

  /// World coordinates of the cell center.
  Vec2 cell_center(CellIndex c) const {
    return {origin_.x + (c.x + 0.5) * resolution_, origin_.y + (c.y + 0.5) * resolution_};
  }

  std::size_t cell_count() const { return cells_.size(); }
  std::size_t occupied_count() const {
    std::size_t n = 0;
    for (auto v : cells_) n += v;
    return n;
  }

 private:
  std::size_t index_of(CellIndex c) const {
    return static_cast<std::size_t>(c.y) * width_ + c.x;
  }

  // Cells with positive-area overlap of [x0,x1] x [y0,y1]; the epsilons keep
  // rectangle edges that land exactly on cell boundaries from bleeding one
  // cell over (or under) through floating-point rounding.
  void paint_rect(double x0, double y0, double x1, double y1, std::uint8_t value) {
    const int cx0 = static_cast<int>(std::floor((x0 - origin_.x) / resolution_ + 1e-9));
    const int cy0 = static_cast<int>(std::floor((y0 - origin_.y) / resolution_ + 1e-9));
    const int cx1 = static_cast<int>(std::floor((x1 - origin_.x) / resolution_ - 1e-9));
    const int cy1 = static_cast<int>(std::floor((y1 - origin_.y) / resolution_ - 1e-9));
    for (int cy = std::max(cy0, 0); cy <= std::min(cy1, height_ - 1); ++cy)
      for (int cx = std::max(cx0, 0); cx <= std::min(cx1, width_ - 1); ++cx)
        cells_[static_cast<std::size_t>(cy) * width_ + cx] = value;
  }

  double resolution_;
  Vec2 origin_;
  int width_;
  int height_;
  std::vector<std::uint8_t> cells_;
};

/// Parses the `gridmap v1` text format:
///   gridmap v1
///   resolution <float> origin <float> <float> size <int> <int>
///   <height rows of width glyphs in {#, .}>  (row 0 = minimum y)
inline OccupancyGrid load_grid(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.size() < 2) throw std::runtime_error("gridmap: missing header");
  if (lines[0] != "gridmap v1")
    throw std::runtime_error("gridmap: bad magic line '" + lines[0] + "'");
  const auto toks = split_ws(lines[1]);
  if (toks.size() != 8 || toks[0] != "resolution" || toks[2] != "origin" || toks[5] != "size")
    throw std::runtime_error("gridmap: malformed header line");
  const double res = parse_double(toks[1], "resolution");
  const double ox = parse_double(toks[3], "origin x");
  const double oy = parse_double(toks[4], "origin y");
  const long long w = parse_int(toks[6], "width");
  const long long h = parse_int(toks[7], "height");
  if (res <= 0.0) throw std::runtime_error("gridmap: resolution must be > 0");
  if (w < 1 || h < 1) throw std::runtime_error("gridmap: size must be >= 1x1");
  if (lines.size() != 2 + static_cast<std::size_t>(h))
    throw std::runtime_error("gridmap: body has " + std::to_string(lines.size() - 2) +
                             " rows, header declares " + std::to_string(h));
  OccupancyGrid grid(res, {ox, oy}, static_cast<int>(w), static_cast<int>(h));
  for (long long row = 0; row < h; ++row) {
    const std::string& body = lines[2 + row];
    if (body.size() != static_cast<std::size_t>(w))
      throw std::runtime_error("gridmap: row " + std::to_string(row) + " has " +
                               std::to_string(body.size()) + " glyphs, expected " +
                               std::to_string(w));
    for (long long col = 0; col < w; ++col) {
      const char g = body[col];
      if (g == '#')
        grid.set_occupied({static_cast<int>(col), static_cast<int>(row)});
      else if (g != '.')
        throw std::runtime_error(std::string("gridmap: unknown glyph '") + g + "'");
    }
  }
  return grid;
}

/// Distance from `point` to the closest occupied cell center within
/// `max_range`, or +infinity when none is that close.
inline double nearest_occupied_distance(const OccupancyGrid& grid, Vec2 point,
                                        double max_range) {
  const double res = grid.resolution();
  const CellIndex lo = grid.cell_at({point.x - max_range, point.y - max_range});
  const CellIndex hi = grid.cell_at({point.x + max_range, point.y + max_range});
  double best_sq = std::numeric_limits<double>::infinity();
  for (int cy = std::max(lo.y, 0); cy <= std::min(hi.y, grid.height() - 1); ++cy)
    for (int cx = std::max(lo.x, 0); cx <= std::min(hi.x, grid.width() - 1); ++cx) {
      if (!grid.occupied({cx, cy})) continue;
      const Vec2 d = grid.cell_center({cx, cy}) - point;
      best_sq = std::min(best_sq, d.squared_norm());
    }
  const double best = std::sqrt(best_sq);
  return best <= max_range ? best : std::numeric_limits<double>::infinity();
}

inline std::string save_grid(const OccupancyGrid& grid) {
  std::string out = "gridmap v1\n";
  out += "resolution " + format_double(grid.resolution()) + " origin " +
         format_double(grid.origin().x) + " " + format_double(grid.origin().y) + " size " +
         std::to_string(grid.width()) + " " + std::to_string(grid.height()) + "\n";
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) out += grid.occupied({x, y}) ? '#' : '.';
    out += '\n';
  }
  return out;
}

}  // namespace trailernav
