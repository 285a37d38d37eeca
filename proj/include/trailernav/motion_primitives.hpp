#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "trailernav/geometry.hpp"
#include "trailernav/text_io.hpp"

namespace trailernav {

struct CostWeights {
  double length = 1.0;
  double turning = 0.05;
  double reverse = 5.0;
};

struct LatticeConfig {
  double xy_resolution = 0.1;
  int num_headings = 16;
  double kappa_max = 2.572151622126319;  // tan(1.2 rad) / 1 m
  std::vector<double> primitive_lengths = {0.2, 0.6};
  bool allow_reverse = false;
  CostWeights cost_weights;
  // The tractor rides tractor_offset ahead of the trailer along its heading;
  // planning rejects poses that put an occupied cell center inside a disc of
  // tractor_radius about that point, so a tracker that can only slow down is
  // never handed a path whose ideal execution trips the safety stop. Radius 0
  // disables the check (trailer footprint only). On arcs the executed tractor
  // additionally sags toward the turn center by about lookahead^2|kappa|/8
  // (pursuit chord cut), so curved primitives check a second disc displaced
  // inward by tractor_cut.
  double tractor_offset = 1.0;
  double tractor_radius = 0.57;
  double tractor_cut = 0.08;

  double heading_bin() const { return kTwoPi / num_headings; }
  double heading_angle(int h) const { return normalize_angle(h * heading_bin()); }
  int nearest_heading(double angle) const {
    const long long h = std::llround(angle / heading_bin());
    return static_cast<int>(((h % num_headings) + num_headings) % num_headings);
  }

  void validate() const {
    if (num_headings < 8 || num_headings % 4 != 0)
      throw std::invalid_argument("num_headings must be >= 8 and divisible by 4");
    if (!(xy_resolution > 0.0)) throw std::invalid_argument("xy_resolution must be > 0");
    if (!(kappa_max > 0.0)) throw std::invalid_argument("kappa_max must be > 0");
    if (primitive_lengths.empty()) throw std::invalid_argument("primitive_lengths empty");
    for (double l : primitive_lengths)
      if (!(l > 0.0)) throw std::invalid_argument("primitive lengths must be > 0");
    if (!(tractor_radius >= 0.0)) throw std::invalid_argument("tractor_radius must be >= 0");
    if (!std::isfinite(tractor_offset)) throw std::invalid_argument("tractor_offset must be finite");
    if (!(tractor_cut >= 0.0)) throw std::invalid_argument("tractor_cut must be >= 0");
  }
};

/// One lattice edge: a constant-curvature motion whose end heading lands
/// exactly on a heading bin and whose end position snaps to the nearest cell
/// (snap error below half a cell per axis by construction). sampled_poses are
/// relative to the start cell center, spaced at most xy_resolution apart, and
/// carry absolute headings for the given start heading bin.
struct MotionPrimitive {
  int start_heading = 0;
  int dcx = 0;
  int dcy = 0;
  int dheading = 0;  // signed heading-bin change
  double curvature = 0.0;
  double arc_length = 0.0;
  bool reverse = false;
  double cost = 0.0;
  std::vector<Pose2D> sampled_poses;
};

struct PrimitiveSet {
  LatticeConfig config;
  std::vector<std::vector<MotionPrimitive>> by_heading;  // index = start heading
  int dropped = 0;  // requested primitives without a usable snapped endpoint

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& v : by_heading) n += v.size();
    return n;
  }
};

namespace detail {

inline void sample_primitive(MotionPrimitive& prim, double theta0, double sample_spacing) {
  const int n_seg = std::max(1, static_cast<int>(std::ceil(prim.arc_length / sample_spacing)));
  prim.sampled_poses.clear();
  prim.sampled_poses.reserve(n_seg + 1);
  const double dir = prim.reverse ? -1.0 : 1.0;
  for (int i = 0; i <= n_seg; ++i) {
    const double s = dir * prim.arc_length * i / n_seg;
    if (prim.curvature == 0.0) {
      prim.sampled_poses.push_back(
          {s * std::cos(theta0), s * std::sin(theta0), normalize_angle(theta0)});
    } else {
      const double k = prim.curvature;
      prim.sampled_poses.push_back({(std::sin(theta0 + k * s) - std::sin(theta0)) / k,
                                    (std::cos(theta0) - std::cos(theta0 + k * s)) / k,
                                    normalize_angle(theta0 + k * s)});
    }
  }
}

inline double primitive_cost(const LatticeConfig& cfg, double arc_length, double sweep,
                             bool reverse) {
  double c = cfg.cost_weights.length * arc_length + cfg.cost_weights.turning * std::abs(sweep);
  if (reverse) c += cfg.cost_weights.reverse * arc_length;
  return c;
}

}  // namespace detail

/// Builds the primitive set: per start heading one straight per configured
/// length plus left/right arcs at curvatures {+-kappa_max, +-kappa_max/2}.
/// Arc lengths are adjusted so each arc subtends a whole number of heading
/// bins at its stated curvature; curvature itself is never bent. Primitives
/// whose snapped endpoint coincides with the start state are dropped and
/// counted, as are exact duplicates (the cheaper one wins).
inline PrimitiveSet generate_primitives(const LatticeConfig& cfg) {
  cfg.validate();
  PrimitiveSet set;
  set.config = cfg;
  set.by_heading.resize(cfg.num_headings);
  const double res = cfg.xy_resolution;
  const double bin = cfg.heading_bin();

  const auto add = [&](MotionPrimitive prim, Vec2 endpoint) {
    prim.dcx = static_cast<int>(std::llround(endpoint.x / res));
    prim.dcy = static_cast<int>(std::llround(endpoint.y / res));
    if (prim.dcx == 0 && prim.dcy == 0 && prim.dheading == 0) {
      ++set.dropped;
      return;
    }
    auto& bucket = set.by_heading[prim.start_heading];
    for (auto& existing : bucket) {
      if (existing.dcx == prim.dcx && existing.dcy == prim.dcy &&
          existing.dheading == prim.dheading && existing.reverse == prim.reverse) {
        ++set.dropped;
        if (prim.cost < existing.cost) existing = std::move(prim);
        return;
      }
    }
    bucket.push_back(std::move(prim));
  };

  for (int h = 0; h < cfg.num_headings; ++h) {
    const double theta0 = cfg.heading_angle(h);
    const Vec2 u = unit_vector(theta0);
    const int dirs = cfg.allow_reverse ? 2 : 1;
    for (int d = 0; d < dirs; ++d) {
      const bool rev = d == 1;
      const double sgn = rev ? -1.0 : 1.0;
      for (double len : cfg.primitive_lengths) {
        // Straight segment.
        {
          MotionPrimitive prim;
          prim.start_heading = h;
          prim.dheading = 0;
          prim.curvature = 0.0;
          prim.arc_length = len;
          prim.reverse = rev;
          prim.cost = detail::primitive_cost(cfg, len, 0.0, rev);
          detail::sample_primitive(prim, theta0, res);
          add(std::move(prim), u * (sgn * len));
        }
        // Arcs at the two curvature magnitudes, both turn directions.
        for (double kappa : {cfg.kappa_max, 0.5 * cfg.kappa_max, -0.5 * cfg.kappa_max,
                             -cfg.kappa_max}) {
          const int n_bins =
              std::max<long long>(1, std::llround(std::abs(kappa) * len / bin));
          const double arc_len = n_bins * bin / std::abs(kappa);
          const double sweep = sgn * kappa * arc_len;  // heading change actually swept
          MotionPrimitive prim;
          prim.start_heading = h;
          prim.dheading = static_cast<int>(std::llround(sweep / bin));
          prim.curvature = kappa;
          prim.arc_length = arc_len;
          prim.reverse = rev;
          prim.cost = detail::primitive_cost(cfg, arc_len, sweep, rev);
          detail::sample_primitive(prim, theta0, res);
          add(std::move(prim), {(std::sin(theta0 + sweep) - std::sin(theta0)) / kappa,
                                (std::cos(theta0) - std::cos(theta0 + sweep)) / kappa});
        }
      }
    }
  }
  return set;
}

/// `primset v1` text export: one record per primitive.
inline std::string export_primitives(const PrimitiveSet& set) {
  std::string out = "primset v1\n";
  out += "num_headings " + std::to_string(set.config.num_headings) + " xy_resolution " +
         format_double(set.config.xy_resolution) + "\n";
  for (const auto& bucket : set.by_heading) {
    for (const auto& p : bucket) {
      out += "prim " + std::to_string(p.start_heading) + " " + format_double(p.curvature) +
             " " + format_double(p.arc_length) + " " + std::to_string(p.dcx) + " " +
             std::to_string(p.dcy) + " " + std::to_string(p.dheading) + " " +
             (p.reverse ? "1" : "0") + " " + format_double(p.cost) + "\n";
    }
  }
  return out;
}

/// Reconstructs a primitive set from its text export. Sampled poses are
/// re-derived from (heading, curvature, length), so a round trip reproduces
/// the generated set exactly.
inline PrimitiveSet import_primitives(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.size() < 2 || lines[0] != "primset v1")
    throw std::runtime_error("primset: bad magic line");
  const auto head = split_ws(lines[1]);
  if (head.size() != 4 || head[0] != "num_headings" || head[2] != "xy_resolution")
    throw std::runtime_error("primset: malformed header");
  PrimitiveSet set;
  set.config.num_headings = static_cast<int>(parse_int(head[1], "num_headings"));
  set.config.xy_resolution = parse_double(head[3], "xy_resolution");
  set.by_heading.resize(set.config.num_headings);
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto t = split_ws(lines[i]);
    if (t.size() != 9 || t[0] != "prim")
      throw std::runtime_error("primset: malformed record at line " + std::to_string(i + 1));
    MotionPrimitive p;
    p.start_heading = static_cast<int>(parse_int(t[1], "heading"));
    p.curvature = parse_double(t[2], "curvature");
    p.arc_length = parse_double(t[3], "arc_length");
    p.dcx = static_cast<int>(parse_int(t[4], "dcx"));
    p.dcy = static_cast<int>(parse_int(t[5], "dcy"));
    p.dheading = static_cast<int>(parse_int(t[6], "dheading"));
    p.reverse = parse_int(t[7], "reverse") != 0;
    p.cost = parse_double(t[8], "cost");
    if (p.start_heading < 0 || p.start_heading >= set.config.num_headings)
      throw std::runtime_error("primset: heading index out of range");
    detail::sample_primitive(p, set.config.heading_angle(p.start_heading),
                             set.config.xy_resolution);
    set.by_heading[p.start_heading].push_back(std::move(p));
  }
  return set;
}

}  // namespace trailernav
