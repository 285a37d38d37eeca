#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trailernav/geometry.hpp"
#include "trailernav/grid.hpp"
#include "trailernav/hitch_controller.hpp"
#include "trailernav/kinematics.hpp"
#include "trailernav/lattice_planner.hpp"
#include "trailernav/map_cover.hpp"
#include "trailernav/path_tracker.hpp"
#include "trailernav/text_io.hpp"

namespace trailernav {

struct DynamicObstacle {
  Vec2 center{0.0, 0.0};
  double radius = 0.0;
  Vec2 velocity{0.0, 0.0};  // straight-line motion, reflecting off walls
};

/// World state threaded through a run. `static_grid` is the ground-truth
/// wall layout; `working_grid` starts as a copy and accumulates cells stamped
/// from filtered sensor points, and is what planning and tracking see.
struct SimWorld {
  OccupancyGrid static_grid;
  OccupancyGrid working_grid;
  MapCover cover;
  std::vector<DynamicObstacle> dynamic_obstacles;
  double time = 0.0;
  double dt = 0.02;
  std::uint64_t rng_seed = 0;
};

inline SimWorld make_world(OccupancyGrid grid, double dt = 0.02, std::uint64_t rng_seed = 0) {
  if (!(dt > 0.0)) throw std::invalid_argument("make_world: dt must be > 0");
  MapCover cover = build_cover(grid);
  OccupancyGrid working = grid;
  return SimWorld{std::move(grid), std::move(working), std::move(cover), {}, 0.0, dt, rng_seed};
}

enum class AbortReason { none, safety_zone, tracker_stuck, timeout };

inline const char* to_string(AbortReason r) {
  switch (r) {
    case AbortReason::none: return "none";
    case AbortReason::safety_zone: return "safety_zone";
    case AbortReason::tracker_stuck: return "tracker_stuck";
    case AbortReason::timeout: return "timeout";
  }
  return "unknown";
}

struct TrajectorySample {
  double t = 0.0;
  TrailerState state;
  Pose2D tractor_pose;
  TractorCommand command;  // applied over [t, t + dt)
};

struct TargetResult {
  Pose2D target;
  bool reached = false;
  double duration = 0.0;
  AbortReason abort_reason = AbortReason::none;
  std::size_t replans = 0;
  std::vector<TrajectorySample> trajectory;
};

struct SimConfigs {
  LatticeConfig lattice;
  TrackerConfig tracker;
  GoalTolerance tolerance;     // defaults: 0.5 m, 0.2 rad
  double sensor_range = 3.0;   // [m]
  int sense_every = 10;        // control ticks between sensor sweeps
  int max_replans = 3;         // per target
};

/// Boundary samples of in-range dynamic obstacles plus the centers of
/// in-range occupied static cells, all relative to the tractor position.
inline std::vector<Vec2> sense_points(const SimWorld& world, const TrailerState& state,
                                      const VehicleParams& params, double sensing_radius) {
  std::vector<Vec2> out;
  if (!(sensing_radius > 0.0)) return out;
  const Vec2 sensor = derive_tractor_pose(state, params).position();
  constexpr int kBoundarySamples = 16;
  for (const DynamicObstacle& ob : world.dynamic_obstacles) {
    if ((ob.center - sensor).norm() - ob.radius > sensing_radius) continue;
    for (int k = 0; k < kBoundarySamples; ++k) {
      const double a = kTwoPi * k / kBoundarySamples;
      out.push_back({ob.center.x + ob.radius * std::cos(a),
                     ob.center.y + ob.radius * std::sin(a)});
    }
  }
  const OccupancyGrid& g = world.static_grid;
  const CellIndex lo = g.cell_at({sensor.x - sensing_radius, sensor.y - sensing_radius});
  const CellIndex hi = g.cell_at({sensor.x + sensing_radius, sensor.y + sensing_radius});
  for (int cy = std::max(lo.y, 0); cy <= std::min(hi.y, g.height() - 1); ++cy)
    for (int cx = std::max(lo.x, 0); cx <= std::min(hi.x, g.width() - 1); ++cx) {
      if (!g.occupied({cx, cy})) continue;
      const Vec2 c = g.cell_center({cx, cy});
      if ((c - sensor).norm() <= sensing_radius) out.push_back(c);
    }
  return out;
}

namespace detail {

/// Distance from `p` to the nearest hazard boundary: occupied static cell
/// centers and dynamic obstacle rims.
inline double hazard_distance(const SimWorld& world, Vec2 p, double range) {
  double d = nearest_occupied_distance(world.static_grid, p, range);
  for (const DynamicObstacle& ob : world.dynamic_obstacles)
    d = std::min(d, (ob.center - p).norm() - ob.radius);
  return d;
}

inline void step_obstacles(SimWorld& world) {
  const auto blocked = [&](Vec2 p) {
    const auto c = world.static_grid.world_to_cell(p);
    return !c || world.static_grid.occupied(*c);
  };
  for (DynamicObstacle& ob : world.dynamic_obstacles) {
    if (ob.velocity.x == 0.0 && ob.velocity.y == 0.0) continue;
    const Vec2 full{ob.center.x + ob.velocity.x * world.dt,
                    ob.center.y + ob.velocity.y * world.dt};
    if (!blocked(full)) {
      ob.center = full;
      continue;
    }
    // Reflect off whichever axis is obstructed, trying x, then y, then both.
    const Vec2 rx{ob.center.x - ob.velocity.x * world.dt,
                  ob.center.y + ob.velocity.y * world.dt};
    const Vec2 ry{ob.center.x + ob.velocity.x * world.dt,
                  ob.center.y - ob.velocity.y * world.dt};
    if (!blocked(rx)) {
      ob.velocity.x = -ob.velocity.x;
      ob.center = rx;
    } else if (!blocked(ry)) {
      ob.velocity.y = -ob.velocity.y;
      ob.center = ry;
    } else {
      ob.velocity = {-ob.velocity.x, -ob.velocity.y};
    }
  }
}

/// Stamps filtered sensor points into the working grid. Returns true if any
/// previously-free cell became occupied.
inline bool stamp_points(SimWorld& world, std::span<const Vec2> novel) {
  bool changed = false;
  for (const Vec2& p : novel) {
    const auto c = world.working_grid.world_to_cell(p);
    if (c && world.working_grid.free(*c)) {
      world.working_grid.set_occupied(*c);
      changed = true;
    }
  }
  return changed;
}

inline TargetResult run_to_target_impl(SimWorld& world, TrailerState& state,
                                       const Pose2D& target, const VehicleParams& params,
                                       const SimConfigs& cfgs, double timeout,
                                       const Planner& planner) {
  TargetResult result;
  result.target = target;
  const double t0 = world.time;
  const auto record = [&](const TractorCommand& cmd) {
    result.trajectory.push_back(
        {world.time, state, derive_tractor_pose(state, params), cmd});
  };
  const auto finalize = [&](bool reached, AbortReason reason) {
    result.reached = reached;
    result.abort_reason = reason;
    result.duration = world.time - t0;
    record({0.0, 0.0});
    return result;
  };

  PlanResult planned =
      planner.plan(world.working_grid, state.trailer_pose, target, cfgs.tolerance);
  if (planned.outcome != PlanOutcome::success)
    return finalize(false, AbortReason::tracker_stuck);

  PathTracker tracker(std::move(planned.path), target, cfgs.tolerance, params, cfgs.tracker);
  HitchController hitch(params);
  const Footprint plan_fp = params.planning_footprint();

  for (long tick = 0;; ++tick) {
    if (world.time - t0 >= timeout - 1e-9) return finalize(false, AbortReason::timeout);

    if (cfgs.sense_every > 0 && tick % cfgs.sense_every == 0) {
      const auto pts = sense_points(world, state, params, cfgs.sensor_range);
      const auto novel = filter_points(world.cover, world.static_grid, pts);
      if (stamp_points(world, novel) &&
          static_cast<int>(result.replans) < cfgs.max_replans &&
          replan_needed(tracker.path(), world.working_grid, plan_fp,
                        tracker.progress_index())) {
        // A failed re-plan keeps the old path and lets the tracker's governor
        // and timers decide the outcome.
        PlanResult re =
            planner.plan(world.working_grid, state.trailer_pose, target, cfgs.tolerance);
        if (re.outcome == PlanOutcome::success) {
          tracker = PathTracker(std::move(re.path), target, cfgs.tolerance, params,
                                cfgs.tracker);
          ++result.replans;
        }
      }
    }

    const TrackerOutput out = tracker.update(state, world.working_grid, world.dt);
    if (out.status == TrackerStatus::goal_reached)
      return finalize(true, AbortReason::none);
    if (out.status == TrackerStatus::blocked || out.status == TrackerStatus::stuck)
      return finalize(false, AbortReason::tracker_stuck);

    const TractorCommand cmd = hitch.update(out.command, state);
    record(cmd);
    state = step(state, cmd, world.dt, params);
    step_obstacles(world);
    world.time += world.dt;

    const Vec2 tractor = derive_tractor_pose(state, params).position();
    const double range = params.safety_radius + world.static_grid.resolution();
    if (hazard_distance(world, tractor, range) < params.safety_radius)
      return finalize(false, AbortReason::safety_zone);
  }
}

}  // namespace detail

/// One planning + tracking episode. Mutates the world (time, working grid,
/// obstacle motion) and returns the final vehicle state alongside the result
/// so a caller can chain targets.
inline std::pair<TargetResult, TrailerState> run_to_target(SimWorld& world, TrailerState state,
                                                           const Pose2D& target,
                                                           const VehicleParams& params,
                                                           const SimConfigs& cfgs,
                                                           double timeout = 120.0) {
  if (!(timeout > 0.0)) throw std::invalid_argument("run_to_target: timeout must be > 0");
  params.validate();
  const Planner planner(params.planning_footprint(), cfgs.lattice);
  TargetResult r = detail::run_to_target_impl(world, state, target, params, cfgs, timeout, planner);
  return {std::move(r), state};
}

/// Visits targets in order, carrying the vehicle state across attempts.
/// Failures move on to the next target; a safety-zone abort ends the whole
/// run, so the result list may be shorter than the target list.
inline std::vector<TargetResult> run_sequence(SimWorld& world, TrailerState state,
                                              std::span<const Pose2D> targets,
                                              const VehicleParams& params,
                                              const SimConfigs& cfgs, double timeout = 120.0) {
  if (targets.empty()) throw std::invalid_argument("run_sequence: no targets");
  if (!(timeout > 0.0)) throw std::invalid_argument("run_sequence: timeout must be > 0");
  params.validate();
  const Planner planner(params.planning_footprint(), cfgs.lattice);
  std::vector<TargetResult> results;
  for (const Pose2D& target : targets) {
    results.push_back(
        detail::run_to_target_impl(world, state, target, params, cfgs, timeout, planner));
    if (results.back().abort_reason == AbortReason::safety_zone) break;
  }
  return results;
}

/// CSV serialization, full round-trip precision, LF line endings.
inline std::string trajectory_csv(const std::vector<TrajectorySample>& trajectory) {
  std::string s = "t,x_trailer,y_trailer,theta,delta,x_tractor,y_tractor,v_cmd,omega_cmd\n";
  for (const TrajectorySample& ts : trajectory) {
    s += format_double(ts.t);
    s += ',';
    s += format_double(ts.state.trailer_pose.x);
    s += ',';
    s += format_double(ts.state.trailer_pose.y);
    s += ',';
    s += format_double(ts.state.trailer_pose.theta);
    s += ',';
    s += format_double(ts.state.delta);
    s += ',';
    s += format_double(ts.tractor_pose.x);
    s += ',';
    s += format_double(ts.tractor_pose.y);
    s += ',';
    s += format_double(ts.command.v);
    s += ',';
    s += format_double(ts.command.omega);
    s += '\n';
  }
  return s;
}

}  // namespace trailernav
