#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "trailernav/geometry.hpp"
#include "trailernav/grid.hpp"
#include "trailernav/hitch_controller.hpp"
#include "trailernav/kinematics.hpp"
#include "trailernav/lattice_planner.hpp"

namespace trailernav {

enum class TrackerStatus { tracking, goal_reached, blocked, stuck };

struct TrackerConfig {
  double lookahead = 0.5;          // pure pursuit lookahead [m]
  double v_cruise = 0.6;           // nominal tracking speed [m/s]
  double slow_radius = 0.7;        // start decelerating this far from the goal [m]
  double obstacle_slow_band = 0.4; // ramp speed to zero over this clearance [m]
  double local_window = 2.0;       // obstacle query range around each circle [m]
  double circle_tractor = 0.35;    // local footprint circle on the tractor center [m]
  double circle_trailer = 0.3;    // local footprint circle on the trailer axle [m]
  double creep_fraction = 0.15;    // of v_cruise, for final heading alignment
  double blocked_timeout = 5.0;    // seconds at obstacle-forced zero speed
  double stuck_timeout = 15.0;     // seconds without net motion
  double stuck_progress_epsilon = 0.05;  // [m]

  void validate() const {
    if (!(lookahead > 0.0)) throw std::invalid_argument("TrackerConfig: lookahead must be > 0");
    if (!(v_cruise > 0.0)) throw std::invalid_argument("TrackerConfig: v_cruise must be > 0");
    if (!(slow_radius > 0.0))
      throw std::invalid_argument("TrackerConfig: slow_radius must be > 0");
    if (!(obstacle_slow_band > 0.0))
      throw std::invalid_argument("TrackerConfig: obstacle_slow_band must be > 0");
    if (!(circle_tractor > 0.0) || !(circle_trailer > 0.0))
      throw std::invalid_argument("TrackerConfig: local footprint radii must be > 0");
    if (!(blocked_timeout > 0.0) || !(stuck_timeout > 0.0))
      throw std::invalid_argument("TrackerConfig: timeouts must be > 0");
  }
};

struct TrackerOutput {
  VelocityCommand command;  // desired trailer (v, omega), pre hitch controller
  TrackerStatus status = TrackerStatus::tracking;
};

/// Local layer: pure pursuit on the lattice path plus a speed governor that
/// reacts to nearby occupancy through a two-circle vehicle model, one circle
/// on the tractor center and one on the trailer axle. The tracker only slows
/// and stops; it never deviates laterally from the path, so clearing the
/// tractor's swept volume is shared between the global plan and this governor.
/// Stateful across one approach to one target; terminal statuses latch.
class PathTracker {
 public:
  PathTracker(GlobalPath path, Pose2D goal, GoalTolerance tol, const VehicleParams& params,
              const TrackerConfig& cfg = {})
      : path_(std::move(path)), goal_(goal), tol_(tol), params_(params), cfg_(cfg) {
    params_.validate();
    cfg_.validate();
    if (cfg_.v_cruise > params_.v_max + 1e-12)
      throw std::invalid_argument("TrackerConfig: v_cruise must not exceed v_max");
    if (path_.poses.empty()) throw std::invalid_argument("PathTracker: empty path");
    arc_.resize(path_.poses.size(), 0.0);
    for (std::size_t i = 1; i < path_.poses.size(); ++i)
      arc_[i] = arc_[i - 1] + distance(path_.poses[i - 1].position(), path_.poses[i].position());
  }

  TrackerStatus status() const { return status_; }
  std::size_t progress_index() const { return progress_; }
  double time_without_progress() const { return stuck_time_; }
  const GlobalPath& path() const { return path_; }

  TrackerOutput update(const TrailerState& state, const OccupancyGrid& grid, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("PathTracker::update: dt must be > 0");
    if (status_ != TrackerStatus::tracking) return {{0.0, 0.0}, status_};

    const Pose2D& pose = state.trailer_pose;
    if (goal_reached(pose)) {
      status_ = TrackerStatus::goal_reached;
      return {{0.0, 0.0}, status_};
    }

    advance_progress(pose.position());
    const double f_obs = obstacle_factor(state, grid);

    double v, omega;
    const bool at_path_end = progress_ + 1 >= path_.poses.size();
    if (at_path_end && distance(pose.position(), goal_.position()) <= tol_.xy) {
      // Inside the goal ball with the heading still off: creep forward along
      // a max-curvature arc towards alignment. The trailer cannot rotate in
      // place, so some forward motion remains.
      const double err = normalize_angle(path_.poses.back().theta - pose.theta);
      v = cfg_.creep_fraction * cfg_.v_cruise * f_obs;
      omega = (err < 0.0 ? -1.0 : 1.0) * params_.kappa_max() * v;
    } else {
      const Pose2D target = lookahead_target();
      const Vec2 local = pose.inverse_transform(target.position());
      const double bearing = std::atan2(local.y, local.x);
      double kappa = 2.0 * std::sin(bearing) / cfg_.lookahead;
      const double kappa_max = params_.kappa_max();
      kappa = std::clamp(kappa, -kappa_max, kappa_max);
      v = cfg_.v_cruise * std::min(goal_factor(pose), f_obs);
      omega = kappa * v;
    }

    // Timers: 'blocked' needs sustained obstacle-forced zero speed; 'stuck'
    // needs sustained absence of net displacement (covers oscillation too).
    if (f_obs <= 0.0)
      blocked_time_ += dt;
    else
      blocked_time_ = 0.0;
    if (!have_anchor_ || distance(pose.position(), anchor_) >= cfg_.stuck_progress_epsilon) {
      anchor_ = pose.position();
      have_anchor_ = true;
      stuck_time_ = 0.0;
    } else {
      stuck_time_ += dt;
    }
    if (blocked_time_ >= cfg_.blocked_timeout) {
      status_ = TrackerStatus::blocked;
      return {{0.0, 0.0}, status_};
    }
    if (stuck_time_ >= cfg_.stuck_timeout) {
      status_ = TrackerStatus::stuck;
      return {{0.0, 0.0}, status_};
    }
    return {{v, omega}, status_};
  }

 private:
  bool goal_reached(const Pose2D& pose) const {
    return distance(pose.position(), goal_.position()) <= tol_.xy &&
           heading_distance(pose.theta, goal_.theta) <= tol_.theta;
  }

  void advance_progress(Vec2 p) {
    // Walk forward while a nearby later path point is at least as close; a
    // bounded window keeps a self-intersecting path from being short-cut.
    constexpr std::size_t kWindow = 40;
    std::size_t best = progress_;
    double best_d = distance(p, path_.poses[progress_].position());
    const std::size_t last = std::min(progress_ + kWindow, path_.poses.size() - 1);
    for (std::size_t i = progress_ + 1; i <= last; ++i) {
      const double d = distance(p, path_.poses[i].position());
      if (d <= best_d) {
        best_d = d;
        best = i;
      }
    }
    progress_ = best;
  }

  Pose2D lookahead_target() const {
    const double base = arc_[progress_];
    for (std::size_t i = progress_; i < path_.poses.size(); ++i)
      if (arc_[i] - base >= cfg_.lookahead) return path_.poses[i];
    return path_.poses.back();
  }

  double goal_factor(const Pose2D& pose) const {
    const double d_goal = distance(pose.position(), goal_.position());
    return d_goal < cfg_.slow_radius ? d_goal / cfg_.slow_radius : 1.0;
  }

  // Linear slowdown with the clearance of the two-circle local footprint,
  // reaching zero when either circle touches an occupied cell center.
  double obstacle_factor(const TrailerState& state, const OccupancyGrid& grid) const {
    const Pose2D tractor = derive_tractor_pose(state, params_);
    const double c1 =
        nearest_occupied_distance(grid, tractor.position(), cfg_.local_window) -
        cfg_.circle_tractor;
    const double c2 =
        nearest_occupied_distance(grid, state.trailer_pose.position(), cfg_.local_window) -
        cfg_.circle_trailer;
    const double clearance = std::min(c1, c2);
    return std::clamp(clearance / cfg_.obstacle_slow_band, 0.0, 1.0);
  }

  GlobalPath path_;
  Pose2D goal_;
  GoalTolerance tol_;
  VehicleParams params_;
  TrackerConfig cfg_;
  std::vector<double> arc_;
  std::size_t progress_ = 0;
  TrackerStatus status_ = TrackerStatus::tracking;
  double blocked_time_ = 0.0;
  double stuck_time_ = 0.0;
  Vec2 anchor_{0.0, 0.0};
  bool have_anchor_ = false;
};

}  // namespace trailernav
