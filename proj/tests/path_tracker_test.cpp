#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "trailernav/trailernav.hpp"

using namespace trailernav;
using Catch::Approx;

namespace {

GlobalPath straight_path(double x0, double x1, double y, double spacing = 0.1) {
  GlobalPath path;
  const int n = static_cast<int>(std::llround((x1 - x0) / spacing));
  for (int i = 0; i <= n; ++i) path.poses.push_back({x0 + i * spacing, y, 0.0});
  path.total_cost = x1 - x0;
  return path;
}

TrailerState state_at(double x, double y, double theta, double delta = 0.0) {
  TrailerState s;
  s.trailer_pose = {x, y, theta};
  s.delta = delta;
  return s;
}

const OccupancyGrid& empty_grid() {
  static const OccupancyGrid grid(0.1, {-5.0, -5.0}, 200, 200);
  return grid;
}

}  // namespace

TEST_CASE("aligned on-path tracking commands cruise speed straight ahead") {
  const VehicleParams params;
  PathTracker tracker(straight_path(0.0, 8.0, 0.0), {8.0, 0.0, 0.0}, {0.5, 0.2}, params);
  const TrackerOutput out = tracker.update(state_at(0.0, 0.0, 0.0), empty_grid(), 0.02);
  CHECK(out.status == TrackerStatus::tracking);
  CHECK(out.command.v == Approx(0.6));
  CHECK(out.command.omega == Approx(0.0).margin(1e-12));
}

TEST_CASE("lookahead point abeam saturates the commanded curvature") {
  const VehicleParams params;
  GlobalPath path;
  path.poses = {{0.0, 0.0, 0.0}, {0.0, 0.5, 0.5 * kPi}, {0.0, 5.0, 0.5 * kPi}};
  PathTracker tracker(path, {0.0, 5.0, 0.5 * kPi}, {0.5, 0.2}, params);
  const TrackerOutput out = tracker.update(state_at(0.0, 0.0, 0.0), empty_grid(), 0.02);
  // Bearing pi/2 gives kappa = 2/lookahead = 4, clamped to kappa_max; the
  // turn rate is curvature times speed, beyond the tractor's own omega_max
  // (the hitch layer owns actuator saturation).
  CHECK(out.command.v == Approx(0.6));
  CHECK(out.command.omega == Approx(params.kappa_max() * 0.6));
  CHECK(out.command.omega > params.omega_max);
}

TEST_CASE("goal ring slows the approach linearly") {
  const VehicleParams params;
  PathTracker tracker(straight_path(0.0, 8.0, 0.0), {8.0, 0.0, 0.0}, {0.1, 0.2}, params);
  // 0.35 m from the goal, inside the 0.7 m slow radius: half cruise speed.
  TrailerState s = state_at(7.65, 0.0, 0.0);
  TrackerOutput out = tracker.update(s, empty_grid(), 0.02);
  CHECK(out.status == TrackerStatus::tracking);
  CHECK(out.command.v == Approx(0.6 * 0.35 / 0.7).epsilon(1e-9));
}

TEST_CASE("clearance governor scales speed and forces a stop at contact") {
  const VehicleParams params;
  const GlobalPath path = straight_path(0.0, 8.0, 1.0);
  const Pose2D goal{8.0, 1.0, 0.0};

  OccupancyGrid mid(0.1, {0.0, 0.0}, 100, 40);
  mid.set_occupied(mid.cell_at({1.05, 1.45}));  // 0.45 m from the trailer axle
  {
    PathTracker tracker(path, goal, {0.5, 0.2}, params);
    const TrackerOutput out = tracker.update(state_at(1.0, 1.0, 0.0), mid, 0.02);
    // Trailer clearance (0.45 - 0.3) against the 0.4 band: factor 0.375.
    const double d = std::hypot(0.05, 0.45);
    const double factor = (d - 0.3) / 0.4;
    CHECK(out.command.v == Approx(0.6 * factor).epsilon(1e-9));
  }

  OccupancyGrid touching(0.1, {0.0, 0.0}, 100, 40);
  touching.set_occupied(touching.cell_at({1.25, 1.05}));  // 0.25 m away
  {
    PathTracker tracker(path, goal, {0.5, 0.2}, params);
    const TrackerOutput out = tracker.update(state_at(1.0, 1.0, 0.0), touching, 0.02);
    CHECK(out.status == TrackerStatus::tracking);
    CHECK(out.command.v == 0.0);
  }

  OccupancyGrid far(0.1, {0.0, 0.0}, 100, 40);
  far.set_occupied(far.cell_at({4.5, 1.05}));  // beyond the local window
  {
    PathTracker tracker(path, goal, {0.5, 0.2}, params);
    const TrackerOutput out = tracker.update(state_at(1.0, 1.0, 0.0), far, 0.02);
    CHECK(out.command.v == Approx(0.6));
  }
}

TEST_CASE("sustained forced stop latches blocked after the timeout") {
  const VehicleParams params;
  OccupancyGrid wall(0.1, {0.0, 0.0}, 100, 40);
  wall.set_occupied(wall.cell_at({1.25, 1.05}));
  PathTracker tracker(straight_path(0.0, 8.0, 1.0), {8.0, 1.0, 0.0}, {0.5, 0.2}, params);

  const TrailerState s = state_at(1.0, 1.0, 0.0);
  // 5 s at dt = 0.02 is 250 updates; the timer trips on the 250th.
  for (int i = 0; i < 249; ++i) {
    const TrackerOutput out = tracker.update(s, wall, 0.02);
    CAPTURE(i);
    REQUIRE(out.status == TrackerStatus::tracking);
    REQUIRE(out.command.v == 0.0);
  }
  CHECK(tracker.update(s, wall, 0.02).status == TrackerStatus::blocked);
  // Terminal status latches even if the obstacle disappears.
  const TrackerOutput after = tracker.update(s, empty_grid(), 0.02);
  CHECK(after.status == TrackerStatus::blocked);
  CHECK(after.command.v == 0.0);
  CHECK(after.command.omega == 0.0);
}

TEST_CASE("a clear interval resets the blocked timer") {
  const VehicleParams params;
  OccupancyGrid wall(0.1, {0.0, 0.0}, 100, 40);
  wall.set_occupied(wall.cell_at({1.25, 1.05}));
  PathTracker tracker(straight_path(0.0, 8.0, 1.0), {8.0, 1.0, 0.0}, {0.5, 0.2}, params);
  const TrailerState s = state_at(1.0, 1.0, 0.0);

  for (int i = 0; i < 150; ++i) REQUIRE(tracker.update(s, wall, 0.02).status == TrackerStatus::tracking);
  REQUIRE(tracker.update(s, empty_grid(), 0.02).status == TrackerStatus::tracking);
  for (int i = 0; i < 249; ++i) {
    CAPTURE(i);
    REQUIRE(tracker.update(s, wall, 0.02).status == TrackerStatus::tracking);
  }
  CHECK(tracker.update(s, wall, 0.02).status == TrackerStatus::blocked);
}

TEST_CASE("a frozen vehicle with free surroundings latches stuck") {
  const VehicleParams params;
  PathTracker tracker(straight_path(0.0, 8.0, 1.0), {8.0, 1.0, 0.0}, {0.5, 0.2}, params);
  const TrailerState s = state_at(1.0, 1.0, 0.0);

  int steps = 0;
  TrackerStatus status = TrackerStatus::tracking;
  while (status == TrackerStatus::tracking && steps < 1000) {
    const TrackerOutput out = tracker.update(s, empty_grid(), 0.02);
    status = out.status;
    if (status == TrackerStatus::tracking) CHECK(out.command.v > 0.0);
    ++steps;
  }
  CHECK(status == TrackerStatus::stuck);
  CHECK(tracker.time_without_progress() >= 15.0);
  // First call plants the anchor, then 750 more accumulate 15 s.
  CHECK(steps == 751);
  CHECK(tracker.update(s, empty_grid(), 0.02).status == TrackerStatus::stuck);
}

TEST_CASE("goal pose inside tolerance reports goal_reached and latches") {
  const VehicleParams params;
  PathTracker tracker(straight_path(0.0, 8.0, 0.0), {8.0, 0.0, 0.0}, {0.5, 0.2}, params);
  const TrackerOutput out = tracker.update(state_at(7.7, 0.1, 0.05), empty_grid(), 0.02);
  CHECK(out.status == TrackerStatus::goal_reached);
  CHECK(out.command.v == 0.0);
  CHECK(out.command.omega == 0.0);
  CHECK(tracker.update(state_at(0.0, 0.0, 0.0), empty_grid(), 0.02).status ==
        TrackerStatus::goal_reached);
}

TEST_CASE("inside the goal ball with heading error the tracker creeps on a max-curvature arc") {
  const VehicleParams params;
  GlobalPath path;
  path.poses = {{0.0, 0.0, 0.0}, {0.1, 0.0, 0.5 * kPi}};
  const Pose2D goal{0.1, 0.0, 0.5 * kPi};
  {
    PathTracker tracker(path, goal, {0.5, 0.2}, params);
    const TrackerOutput out = tracker.update(state_at(0.1, 0.0, 0.0), empty_grid(), 0.02);
    CHECK(out.status == TrackerStatus::tracking);
    CHECK(out.command.v == Approx(0.15 * 0.6));
    CHECK(out.command.omega == Approx(params.kappa_max() * 0.15 * 0.6));
  }
  {
    // Heading past the target: the creep arc bends the other way.
    PathTracker tracker(path, goal, {0.5, 0.2}, params);
    const TrackerOutput out = tracker.update(state_at(0.1, 0.0, -kPi), empty_grid(), 0.02);
    CHECK(out.command.omega == Approx(-params.kappa_max() * 0.15 * 0.6));
  }
}

TEST_CASE("commands always satisfy the curvature contract") {
  const VehicleParams params;
  GlobalPath path;
  for (int i = 0; i <= 60; ++i) {
    const double s = 0.1 * i;
    path.poses.push_back({std::sin(s), 1.0 - std::cos(s), normalize_angle(s)});
  }
  const Pose2D goal = path.poses.back();
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> dpos(-0.4, 0.4), dth(-1.0, 1.0), didx(0.0, 6.0);
  for (int trial = 0; trial < 300; ++trial) {
    PathTracker tracker(path, goal, {0.3, 0.2}, params);
    const double s = didx(rng);
    const TrailerState st =
        state_at(std::sin(s) + dpos(rng), 1.0 - std::cos(s) + dpos(rng), dth(rng));
    const TrackerOutput out = tracker.update(st, empty_grid(), 0.02);
    CHECK(out.command.v >= 0.0);
    CHECK(out.command.v <= 0.6 + 1e-12);
    CHECK(std::abs(out.command.omega) <= params.kappa_max() * out.command.v + 1e-9);
  }
}

TEST_CASE("closed-loop tracking pulls a laterally offset start onto the path") {
  const VehicleParams params;
  PathTracker tracker(straight_path(0.0, 8.0, 0.0), {8.0, 0.0, 0.0}, {0.5, 0.2}, params);
  HitchController hitch(params);
  TrailerState s = state_at(0.0, 0.3, 0.0);

  std::size_t last_progress = 0;
  TrackerStatus status = TrackerStatus::tracking;
  for (int i = 0; i < 2000 && status == TrackerStatus::tracking; ++i) {
    const TrackerOutput out = tracker.update(s, empty_grid(), 0.02);
    status = out.status;
    if (status != TrackerStatus::tracking) break;
    CHECK(tracker.progress_index() >= last_progress);
    last_progress = tracker.progress_index();
    s = step(s, hitch.update(out.command, s), 0.02, params);
    if (s.trailer_pose.x >= 5.0) {
      CHECK(std::abs(s.trailer_pose.y) < 0.05);
    }
  }
  CHECK(status == TrackerStatus::goal_reached);
  CHECK(distance(s.trailer_pose.position(), {8.0, 0.0}) <= 0.5);
}

TEST_CASE("tracker constructor and update validate their inputs") {
  const VehicleParams params;
  const GlobalPath path = straight_path(0.0, 2.0, 0.0);
  const Pose2D goal{2.0, 0.0, 0.0};

  GlobalPath empty;
  CHECK_THROWS_AS(PathTracker(empty, goal, {0.5, 0.2}, params), std::invalid_argument);

  TrackerConfig fast;
  fast.v_cruise = 0.9;  // above v_max 0.8
  CHECK_THROWS_AS(PathTracker(path, goal, {0.5, 0.2}, params, fast), std::invalid_argument);

  TrackerConfig zero;
  zero.lookahead = 0.0;
  CHECK_THROWS_AS(PathTracker(path, goal, {0.5, 0.2}, params, zero), std::invalid_argument);

  PathTracker tracker(path, goal, {0.5, 0.2}, params);
  CHECK_THROWS_AS(tracker.update(state_at(0.0, 0.0, 0.0), empty_grid(), 0.0),
                  std::invalid_argument);
}
