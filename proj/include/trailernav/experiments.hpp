#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "trailernav/geometry.hpp"
#include "trailernav/grid.hpp"
#include "trailernav/kinematics.hpp"
#include "trailernav/simulator.hpp"
#include "trailernav/text_io.hpp"

namespace trailernav {

struct Course {
  OccupancyGrid grid;
  std::vector<Pose2D> waypoints;
};

/// Square ring corridor: an `interior x interior` arena bounded by 0.2 m
/// walls, with a central square block sized to leave corridor `width` on all
/// four sides. Waypoints P0..P3 sit mid-corridor at the middle of each side,
/// headed counterclockwise (east, north, west, south).
inline Course make_loop_course(double width, double interior = 10.0, double resolution = 0.1) {
  if (!(width >= 1.0 && width <= 3.0))
    throw std::invalid_argument("make_loop_course: width must be in [1.0, 3.0]");
  const double wall = 0.2;
  const int cells = static_cast<int>(std::llround((interior + 2.0 * wall) / resolution));
  OccupancyGrid grid(resolution, {-wall, -wall}, cells, cells);
  grid.fill_rect(-wall, -wall, interior + wall, 0.0);
  grid.fill_rect(-wall, interior, interior + wall, interior + wall);
  grid.fill_rect(-wall, 0.0, 0.0, interior);
  grid.fill_rect(interior, 0.0, interior + wall, interior);
  grid.fill_rect(width, width, interior - width, interior - width);
  const double mid = 0.5 * interior;
  const double half_w = 0.5 * width;
  std::vector<Pose2D> wp = {
      {mid, half_w, 0.0},                          // P0: bottom side, eastbound
      {interior - half_w, mid, 0.5 * kPi},         // P1: right side, northbound
      {mid, interior - half_w, normalize_angle(kPi)},  // P2: top side, westbound
      {half_w, mid, normalize_angle(-0.5 * kPi)},  // P3: left side, southbound
  };
  return {std::move(grid), std::move(wp)};
}

/// L-shaped course with exactly one critical corner. Two 2.5 m square rooms
/// are joined by perpendicular corridor legs of the requested width meeting
/// at a right-angle corner; the wall-face gap at the corner equals `width`
/// on both approaches. P0 sits in the west room headed east, P1 in the north
/// room headed north, each on the centerline of its corridor leg so the
/// tractor ahead of it faces open corridor rather than a room wall.
inline Course make_single_corner(double width, double resolution = 0.1) {
  if (!(width >= 1.0 && width <= 3.0))
    throw std::invalid_argument("make_single_corner: width must be in [1.0, 3.0]");
  const double wall = 0.2, extent = 6.0, room = 2.5;
  const int cells = static_cast<int>(std::llround((extent + 2.0 * wall) / resolution));
  OccupancyGrid grid(resolution, {-wall, -wall}, cells, cells);
  grid.fill_rect(-wall, -wall, extent + wall, extent + wall);
  grid.clear_rect(0.0, 0.0, room, room);                          // west room
  grid.clear_rect(0.0, 0.0, extent, width);                       // eastbound leg
  grid.clear_rect(extent - width, 0.0, extent, extent);           // northbound leg
  grid.clear_rect(extent - room, extent - room, extent, extent);  // north room
  std::vector<Pose2D> wp = {
      {0.5 * room, 0.5 * width, 0.0},                          // P0
      {extent - 0.5 * width, extent - 0.5 * room, 0.5 * kPi},  // P1
  };
  return {std::move(grid), std::move(wp)};
}

struct Scenario {
  enum class Layout { loop, corner };

  Layout layout = Layout::loop;
  std::vector<double> widths = {1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0};
  double corridor_length = 10.0;
  int runs = 25;
  int targets_per_run = 0;  // 0 = layout default (loop: 4, corner: 1)
  std::uint64_t seed = 1;
  double timeout = 120.0;
  double dt = 0.02;
  double jitter_xy = 0.02;      // [m], uniform, applied to the start pose
  double jitter_theta = 0.02;   // [rad]
  VehicleParams vehicle;
  SimConfigs sim;

  int resolved_targets_per_run() const {
    if (targets_per_run > 0) return targets_per_run;
    return layout == Layout::loop ? 4 : 1;
  }

  void validate() const {
    if (widths.empty()) throw std::invalid_argument("scenario: widths must be non-empty");
    if (!std::is_sorted(widths.begin(), widths.end()) ||
        std::adjacent_find(widths.begin(), widths.end()) != widths.end())
      throw std::invalid_argument("scenario: widths must be strictly increasing");
    for (double w : widths)
      if (!(w >= 1.0 && w <= 3.0))
        throw std::invalid_argument("scenario: widths must lie in [1.0, 3.0]");
    if (runs < 1) throw std::invalid_argument("scenario: runs must be >= 1");
    if (targets_per_run < 0) throw std::invalid_argument("scenario: targets_per_run < 0");
    if (!(corridor_length >= 6.0 && corridor_length <= 50.0))
      throw std::invalid_argument("scenario: corridor_length must be in [6, 50]");
    if (!(timeout > 0.0) || !(dt > 0.0) || dt > 0.1)
      throw std::invalid_argument("scenario: timeout must be > 0 and dt in (0, 0.1]");
    if (jitter_xy < 0.0 || jitter_theta < 0.0)
      throw std::invalid_argument("scenario: jitter must be >= 0");
    vehicle.validate();
    sim.lattice.validate();
    sim.tracker.validate();
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t run_seed(std::uint64_t base, std::size_t width_index,
                              std::size_t run_index) {
  return splitmix64(splitmix64(base + 0x51ED270B * (width_index + 1)) + run_index);
}

/// Uniform double in [0, 1) from raw generator bits; identical across
/// platforms, unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Pose2D jitter_pose(const Pose2D& p, std::mt19937_64& rng, double amp_xy,
                          double amp_theta) {
  const double dx = (2.0 * uniform01(rng) - 1.0) * amp_xy;
  const double dy = (2.0 * uniform01(rng) - 1.0) * amp_xy;
  const double dth = (2.0 * uniform01(rng) - 1.0) * amp_theta;
  return {p.x + dx, p.y + dy, normalize_angle(p.theta + dth)};
}

inline Pose2D flipped(const Pose2D& p) {
  return {p.x, p.y, normalize_angle(p.theta + kPi)};
}

}  // namespace detail

struct RunPlan {
  Pose2D start;
  std::vector<Pose2D> targets;
};

/// Start pose and target list for one run, before jitter. Loop runs always
/// start at P0 and chase P1, P2, P3, P0. Corner runs alternate direction by
/// run index: even runs go P0 -> P1, odd runs start at P1 turned around and
/// head back to P0 turned around, so travel is always forward.
inline RunPlan make_run_plan(const Scenario& sc, const Course& course, int run_index) {
  RunPlan plan;
  const int n = sc.resolved_targets_per_run();
  if (sc.layout == Scenario::Layout::loop) {
    plan.start = course.waypoints[0];
    for (int k = 0; k < n; ++k) plan.targets.push_back(course.waypoints[(k + 1) % 4]);
  } else {
    const Pose2D p0 = course.waypoints[0], p1 = course.waypoints[1];
    const bool forward = run_index % 2 == 0;
    plan.start = forward ? p0 : detail::flipped(p1);
    for (int k = 0; k < n; ++k) {
      const bool leg_forward = forward == (k % 2 == 0);
      plan.targets.push_back(leg_forward ? p1 : detail::flipped(p0));
    }
  }
  return plan;
}

struct RunRecord {
  std::size_t width_index = 0;
  int run_index = 0;
  double width = 0.0;
  Pose2D start;  // jittered
  std::vector<TargetResult> results;
};

struct WidthMetrics {
  double width = 0.0;
  int runs = 0;
  int targets_total = 0;
  int targets_attempted = 0;
  int targets_reached = 0;
  double success_rate = 0.0;
  double mean_time_per_target = 0.0;  // over reached targets
  int aborts_safety_zone = 0;
  int aborts_tracker_stuck = 0;
  int aborts_timeout = 0;
};

struct BatchResult {
  std::vector<RunRecord> runs;          // ordered by (width_index, run_index)
  std::vector<WidthMetrics> per_width;  // ordered by width ascending
};

inline RunRecord execute_run(const Scenario& sc, const Course& course, std::size_t width_index,
                             int run_index) {
  RunRecord rec;
  rec.width_index = width_index;
  rec.run_index = run_index;
  rec.width = sc.widths[width_index];
  const RunPlan plan = make_run_plan(sc, course, run_index);
  std::mt19937_64 rng(detail::run_seed(sc.seed, width_index, static_cast<std::size_t>(run_index)));
  rec.start = detail::jitter_pose(plan.start, rng, sc.jitter_xy, sc.jitter_theta);
  SimWorld world = make_world(course.grid, sc.dt, sc.seed);
  TrailerState state;
  state.trailer_pose = rec.start;
  rec.results = run_sequence(world, state, plan.targets, sc.vehicle, sc.sim, sc.timeout);
  return rec;
}

inline std::vector<WidthMetrics> aggregate_metrics(const Scenario& sc,
                                                   const std::vector<RunRecord>& runs) {
  std::vector<WidthMetrics> out(sc.widths.size());
  const int per_run = sc.resolved_targets_per_run();
  for (std::size_t wi = 0; wi < sc.widths.size(); ++wi) {
    WidthMetrics& m = out[wi];
    m.width = sc.widths[wi];
    m.runs = sc.runs;
    m.targets_total = sc.runs * per_run;
  }
  for (const RunRecord& rec : runs) {
    WidthMetrics& m = out[rec.width_index];
    m.targets_attempted += static_cast<int>(rec.results.size());
    for (const TargetResult& r : rec.results) {
      if (r.reached) {
        ++m.targets_reached;
        m.mean_time_per_target += r.duration;
      }
      switch (r.abort_reason) {
        case AbortReason::safety_zone: ++m.aborts_safety_zone; break;
        case AbortReason::tracker_stuck: ++m.aborts_tracker_stuck; break;
        case AbortReason::timeout: ++m.aborts_timeout; break;
        case AbortReason::none: break;
      }
    }
  }
  for (WidthMetrics& m : out) {
    m.success_rate = m.targets_total > 0
                         ? static_cast<double>(m.targets_reached) / m.targets_total
                         : 0.0;
    m.mean_time_per_target =
        m.targets_reached > 0 ? m.mean_time_per_target / m.targets_reached : 0.0;
  }
  return out;
}

/// Runs the whole sweep. `parallel` > 1 distributes runs over that many
/// threads; results land in preassigned slots, so the output is identical for
/// any thread count.
inline BatchResult run_batch(const Scenario& sc, int parallel = 1) {
  sc.validate();
  if (parallel < 1) parallel = 1;

  std::vector<Course> courses;
  courses.reserve(sc.widths.size());
  for (double w : sc.widths)
    courses.push_back(sc.layout == Scenario::Layout::loop
                          ? make_loop_course(w, sc.corridor_length)
                          : make_single_corner(w));

  const std::size_t total = sc.widths.size() * static_cast<std::size_t>(sc.runs);
  BatchResult batch;
  batch.runs.resize(total);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) return;
      const std::size_t wi = task / sc.runs;
      const int ri = static_cast<int>(task % sc.runs);
      batch.runs[task] = execute_run(sc, courses[wi], wi, ri);
    }
  };
  const int n_threads = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(parallel), total));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  batch.per_width = aggregate_metrics(sc, batch.runs);
  return batch;
}

inline std::string metrics_csv(const std::vector<WidthMetrics>& per_width) {
  std::string s =
      "width,runs,targets_total,targets_attempted,targets_reached,success_rate,"
      "mean_time_per_target,aborts_safety_zone,aborts_tracker_stuck,aborts_timeout\n";
  for (const WidthMetrics& m : per_width) {
    s += format_double(m.width);
    s += ',' + std::to_string(m.runs);
    s += ',' + std::to_string(m.targets_total);
    s += ',' + std::to_string(m.targets_attempted);
    s += ',' + std::to_string(m.targets_reached);
    s += ',' + format_double(m.success_rate);
    s += ',' + format_double(m.mean_time_per_target);
    s += ',' + std::to_string(m.aborts_safety_zone);
    s += ',' + std::to_string(m.aborts_tracker_stuck);
    s += ',' + std::to_string(m.aborts_timeout);
    s += '\n';
  }
  return s;
}

/// Raw per-target outcomes, one row per attempted target.
inline std::string results_csv(const BatchResult& batch) {
  std::string s = "width,run,target,reached,abort_reason,duration,replans,"
                  "final_x,final_y,final_theta\n";
  for (const RunRecord& rec : batch.runs) {
    for (std::size_t ti = 0; ti < rec.results.size(); ++ti) {
      const TargetResult& r = rec.results[ti];
      const TrailerState& fin = r.trajectory.back().state;
      s += format_double(rec.width);
      s += ',' + std::to_string(rec.run_index);
      s += ',' + std::to_string(ti);
      s += ',' + std::string(r.reached ? "1" : "0");
      s += ',' + std::string(to_string(r.abort_reason));
      s += ',' + format_double(r.duration);
      s += ',' + std::to_string(r.replans);
      s += ',' + format_double(fin.trailer_pose.x);
      s += ',' + format_double(fin.trailer_pose.y);
      s += ',' + format_double(fin.trailer_pose.theta);
      s += '\n';
    }
  }
  return s;
}

inline const char* to_string(Scenario::Layout l) {
  return l == Scenario::Layout::loop ? "loop" : "corner";
}

/// Fully resolved scenario text; parse_scenario(serialize_scenario(sc))
/// round-trips exactly. Also the scenario.lock payload.
inline std::string serialize_scenario(const Scenario& sc) {
  const auto rect = [](const Footprint& fp) {
    const auto& r = std::get<RectangleFootprint>(fp);
    return format_double(r.length) + " " + format_double(r.width) + " " +
           format_double(r.offset_x);
  };
  std::string s = "scenario v1\n";
  s += "layout " + std::string(to_string(sc.layout)) + "\n";
  s += "widths";
  for (double w : sc.widths) s += " " + format_double(w);
  s += "\n";
  s += "corridor_length " + format_double(sc.corridor_length) + "\n";
  s += "runs " + std::to_string(sc.runs) + "\n";
  s += "targets_per_run " + std::to_string(sc.targets_per_run) + "\n";
  s += "seed " + std::to_string(sc.seed) + "\n";
  s += "timeout " + format_double(sc.timeout) + "\n";
  s += "dt " + format_double(sc.dt) + "\n";
  s += "jitter_xy " + format_double(sc.jitter_xy) + "\n";
  s += "jitter_theta " + format_double(sc.jitter_theta) + "\n";
  s += "wheelbase " + format_double(sc.vehicle.wheelbase_L) + "\n";
  s += "delta_max " + format_double(sc.vehicle.delta_max) + "\n";
  s += "v_max " + format_double(sc.vehicle.v_max) + "\n";
  s += "omega_max " + format_double(sc.vehicle.omega_max) + "\n";
  s += "kp " + format_double(sc.vehicle.Kp) + "\n";
  s += "alpha " + format_double(sc.vehicle.alpha) + "\n";
  s += "tractor_rect " + rect(sc.vehicle.tractor_footprint) + "\n";
  s += "trailer_rect " + rect(sc.vehicle.trailer_footprint) + "\n";
  s += "safety_radius " + format_double(sc.vehicle.safety_radius) + "\n";
  s += "planning_inflation " + format_double(sc.vehicle.planning_inflation) + "\n";
  s += "xy_resolution " + format_double(sc.sim.lattice.xy_resolution) + "\n";
  s += "num_headings " + std::to_string(sc.sim.lattice.num_headings) + "\n";
  s += "kappa_max " + format_double(sc.sim.lattice.kappa_max) + "\n";
  s += "primitive_lengths";
  for (double l : sc.sim.lattice.primitive_lengths) s += " " + format_double(l);
  s += "\n";
  s += "allow_reverse " + std::string(sc.sim.lattice.allow_reverse ? "1" : "0") + "\n";
  s += "cost_length " + format_double(sc.sim.lattice.cost_weights.length) + "\n";
  s += "cost_turning " + format_double(sc.sim.lattice.cost_weights.turning) + "\n";
  s += "cost_reverse " + format_double(sc.sim.lattice.cost_weights.reverse) + "\n";
  s += "tractor_offset " + format_double(sc.sim.lattice.tractor_offset) + "\n";
  s += "tractor_radius " + format_double(sc.sim.lattice.tractor_radius) + "\n";
  s += "tractor_cut " + format_double(sc.sim.lattice.tractor_cut) + "\n";
  s += "lookahead " + format_double(sc.sim.tracker.lookahead) + "\n";
  s += "v_cruise " + format_double(sc.sim.tracker.v_cruise) + "\n";
  s += "slow_radius " + format_double(sc.sim.tracker.slow_radius) + "\n";
  s += "obstacle_slow_band " + format_double(sc.sim.tracker.obstacle_slow_band) + "\n";
  s += "local_window " + format_double(sc.sim.tracker.local_window) + "\n";
  s += "circle_tractor " + format_double(sc.sim.tracker.circle_tractor) + "\n";
  s += "circle_trailer " + format_double(sc.sim.tracker.circle_trailer) + "\n";
  s += "creep_fraction " + format_double(sc.sim.tracker.creep_fraction) + "\n";
  s += "blocked_timeout " + format_double(sc.sim.tracker.blocked_timeout) + "\n";
  s += "stuck_timeout " + format_double(sc.sim.tracker.stuck_timeout) + "\n";
  s += "stuck_progress_epsilon " + format_double(sc.sim.tracker.stuck_progress_epsilon) + "\n";
  s += "tolerance_xy " + format_double(sc.sim.tolerance.xy) + "\n";
  s += "tolerance_theta " + format_double(sc.sim.tolerance.theta) + "\n";
  s += "sensor_range " + format_double(sc.sim.sensor_range) + "\n";
  s += "sense_every " + std::to_string(sc.sim.sense_every) + "\n";
  s += "max_replans " + std::to_string(sc.sim.max_replans) + "\n";
  return s;
}

/// Writes `content` exactly (binary mode, so LF endings survive untouched).
inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return s;
}

/// Persists a batch as:
///   <out>/scenario.lock          fully resolved configuration
///   <out>/metrics.csv            one row per width
///   <out>/results.csv            one row per attempted target
///   <out>/runs/<width>/<run>/<target>.csv   trajectories
inline void write_batch(const BatchResult& batch, const Scenario& sc,
                        const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "scenario.lock", serialize_scenario(sc));
  write_file(out_dir / "metrics.csv", metrics_csv(batch.per_width));
  write_file(out_dir / "results.csv", results_csv(batch));
  for (const RunRecord& rec : batch.runs) {
    const std::filesystem::path run_dir =
        out_dir / "runs" / format_double(rec.width) / std::to_string(rec.run_index);
    std::filesystem::create_directories(run_dir);
    for (std::size_t ti = 0; ti < rec.results.size(); ++ti)
      write_file(run_dir / (std::to_string(ti) + ".csv"),
                 trajectory_csv(rec.results[ti].trajectory));
  }
}

/// Line-oriented `key value...` schema; every key optional except the
/// `scenario v1` magic, `#` comments and blank lines ignored, unknown keys
/// rejected. Widths are sorted ascending on load.
inline Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty() || lines[0] != "scenario v1")
    throw std::runtime_error("scenario: missing 'scenario v1' header");
  const auto rect = [](const std::vector<std::string>& f) -> Footprint {
    if (f.size() != 4) throw std::runtime_error("scenario: footprint needs 3 numbers");
    return RectangleFootprint{parse_double(f[1]), parse_double(f[2]), parse_double(f[3])};
  };
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> f = split_ws(line);
    if (f.empty()) continue;
    const std::string& key = f[0];
    const auto one = [&]() -> const std::string& {
      if (f.size() != 2) throw std::runtime_error("scenario: key '" + key + "' needs one value");
      return f[1];
    };
    if (key == "layout") {
      const std::string& v = one();
      if (v == "loop")
        sc.layout = Scenario::Layout::loop;
      else if (v == "corner")
        sc.layout = Scenario::Layout::corner;
      else
        throw std::runtime_error("scenario: layout must be loop or corner");
    } else if (key == "widths") {
      sc.widths.clear();
      for (std::size_t k = 1; k < f.size(); ++k) sc.widths.push_back(parse_double(f[k]));
      std::sort(sc.widths.begin(), sc.widths.end());
    } else if (key == "corridor_length") {
      sc.corridor_length = parse_double(one());
    } else if (key == "runs") {
      sc.runs = static_cast<int>(parse_int(one()));
    } else if (key == "targets_per_run") {
      sc.targets_per_run = static_cast<int>(parse_int(one()));
    } else if (key == "seed") {
      sc.seed = static_cast<std::uint64_t>(parse_int(one()));
    } else if (key == "timeout") {
      sc.timeout = parse_double(one());
    } else if (key == "dt") {
      sc.dt = parse_double(one());
    } else if (key == "jitter_xy") {
      sc.jitter_xy = parse_double(one());
    } else if (key == "jitter_theta") {
      sc.jitter_theta = parse_double(one());
    } else if (key == "wheelbase") {
      sc.vehicle.wheelbase_L = parse_double(one());
    } else if (key == "delta_max") {
      sc.vehicle.delta_max = parse_double(one());
    } else if (key == "v_max") {
      sc.vehicle.v_max = parse_double(one());
    } else if (key == "omega_max") {
      sc.vehicle.omega_max = parse_double(one());
    } else if (key == "kp") {
      sc.vehicle.Kp = parse_double(one());
    } else if (key == "alpha") {
      sc.vehicle.alpha = parse_double(one());
    } else if (key == "tractor_rect") {
      sc.vehicle.tractor_footprint = rect(f);
    } else if (key == "trailer_rect") {
      sc.vehicle.trailer_footprint = rect(f);
    } else if (key == "safety_radius") {
      sc.vehicle.safety_radius = parse_double(one());
    } else if (key == "planning_inflation") {
      sc.vehicle.planning_inflation = parse_double(one());
    } else if (key == "xy_resolution") {
      sc.sim.lattice.xy_resolution = parse_double(one());
    } else if (key == "num_headings") {
      sc.sim.lattice.num_headings = static_cast<int>(parse_int(one()));
    } else if (key == "kappa_max") {
      sc.sim.lattice.kappa_max = parse_double(one());
    } else if (key == "primitive_lengths") {
      sc.sim.lattice.primitive_lengths.clear();
      for (std::size_t k = 1; k < f.size(); ++k)
        sc.sim.lattice.primitive_lengths.push_back(parse_double(f[k]));
    } else if (key == "allow_reverse") {
      sc.sim.lattice.allow_reverse = parse_int(one()) != 0;
    } else if (key == "cost_length") {
      sc.sim.lattice.cost_weights.length = parse_double(one());
    } else if (key == "cost_turning") {
      sc.sim.lattice.cost_weights.turning = parse_double(one());
    } else if (key == "cost_reverse") {
      sc.sim.lattice.cost_weights.reverse = parse_double(one());
    } else if (key == "tractor_offset") {
      sc.sim.lattice.tractor_offset = parse_double(one());
    } else if (key == "tractor_radius") {
      sc.sim.lattice.tractor_radius = parse_double(one());
    } else if (key == "tractor_cut") {
      sc.sim.lattice.tractor_cut = parse_double(one());
    } else if (key == "lookahead") {
      sc.sim.tracker.lookahead = parse_double(one());
    } else if (key == "v_cruise") {
      sc.sim.tracker.v_cruise = parse_double(one());
    } else if (key == "slow_radius") {
      sc.sim.tracker.slow_radius = parse_double(one());
    } else if (key == "obstacle_slow_band") {
      sc.sim.tracker.obstacle_slow_band = parse_double(one());
    } else if (key == "local_window") {
      sc.sim.tracker.local_window = parse_double(one());
    } else if (key == "circle_tractor") {
      sc.sim.tracker.circle_tractor = parse_double(one());
    } else if (key == "circle_trailer") {
      sc.sim.tracker.circle_trailer = parse_double(one());
    } else if (key == "creep_fraction") {
      sc.sim.tracker.creep_fraction = parse_double(one());
    } else if (key == "blocked_timeout") {
      sc.sim.tracker.blocked_timeout = parse_double(one());
    } else if (key == "stuck_timeout") {
      sc.sim.tracker.stuck_timeout = parse_double(one());
    } else if (key == "stuck_progress_epsilon") {
      sc.sim.tracker.stuck_progress_epsilon = parse_double(one());
    } else if (key == "tolerance_xy") {
      sc.sim.tolerance.xy = parse_double(one());
    } else if (key == "tolerance_theta") {
      sc.sim.tolerance.theta = parse_double(one());
    } else if (key == "sensor_range") {
      sc.sim.sensor_range = parse_double(one());
    } else if (key == "sense_every") {
      sc.sim.sense_every = static_cast<int>(parse_int(one()));
    } else if (key == "max_replans") {
      sc.sim.max_replans = static_cast<int>(parse_int(one()));
    } else {
      throw std::runtime_error("scenario: unknown key '" + key + "'");
    }
  }
  sc.validate();
  return sc;
}

}  // namespace trailernav
