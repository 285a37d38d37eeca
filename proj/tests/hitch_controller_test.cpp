#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "trailernav/trailernav.hpp"

using namespace trailernav;
using Catch::Approx;

namespace {

TrailerState state_with_delta(double delta) {
  TrailerState s;
  s.trailer_pose = {0.0, 0.0, 0.0};
  s.delta = delta;
  return s;
}

}  // namespace

TEST_CASE("target_steering maps curvature to a steering angle") {
  const VehicleParams p;  // L = 1, delta_max = 1.2

  const auto straight = target_steering({1.0, 0.0}, p);
  REQUIRE(straight.has_value());
  CHECK(straight->kappa == 0.0);
  CHECK(straight->delta_target == 0.0);

  const auto unit_turn = target_steering({1.0, 1.0}, p);
  REQUIRE(unit_turn.has_value());
  CHECK(unit_turn->kappa == Approx(1.0));
  CHECK(unit_turn->delta_target == Approx(std::atan(1.0)).margin(1e-12));

  const auto mirrored = target_steering({-1.0, 1.0}, p);
  REQUIRE(mirrored.has_value());
  CHECK(mirrored->kappa == Approx(-1.0));
  CHECK(mirrored->delta_target == Approx(-std::atan(1.0)).margin(1e-12));

  const auto saturated = target_steering({1.0, 10.0}, p);
  REQUIRE(saturated.has_value());
  CHECK(saturated->kappa == Approx(10.0));
  CHECK(saturated->delta_target == Approx(p.delta_max));
}

TEST_CASE("target_steering degenerate cases") {
  const VehicleParams p;
  CHECK_FALSE(target_steering({0.0, 0.5}, p).has_value());
  CHECK_FALSE(target_steering({0.0005, -2.0}, p).has_value());

  const auto stop = target_steering({0.0, 0.0}, p);
  REQUIRE(stop.has_value());
  CHECK(stop->kappa == 0.0);
  CHECK(stop->delta_target == 0.0);

  // Exactly at the epsilon the command is treated as a moving one.
  const auto at_eps = target_steering({kVelocityEpsilon, 3.0}, p);
  REQUIRE(at_eps.has_value());
  CHECK(at_eps->delta_target == Approx(p.delta_max));
}

TEST_CASE("update passes speed through unchanged at zero steering deviation") {
  const VehicleParams p;
  HitchController ctl(p);
  const TractorCommand out = ctl.update({0.5, 0.0}, state_with_delta(0.0));
  CHECK(out.v == Approx(0.5));
  CHECK(out.omega == Approx(0.0).margin(1e-15));
}

TEST_CASE("velocity gate follows the Gaussian of the steering deviation") {
  VehicleParams p;  // alpha = 0.5
  {
    HitchController ctl(p);
    // Target 0, current delta -alpha: deviation == alpha gives a 1/e gate.
    const TractorCommand out = ctl.update({0.5, 0.0}, state_with_delta(-p.alpha));
    CHECK(out.v == Approx(0.5 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(out.omega == Approx(std::min(p.Kp * p.alpha, p.omega_max)));
  }
  {
    p.alpha = 10.0;
    HitchController ctl(p);
    const TractorCommand out = ctl.update({0.5, 0.0}, state_with_delta(-0.5));
    CHECK(out.v == Approx(0.5 * std::exp(-0.0025)).epsilon(1e-12));
  }
}

TEST_CASE("gate is symmetric in the deviation and never amplifies speed") {
  const VehicleParams p;
  HitchController a(p), b(p);
  const TractorCommand left = a.update({0.5, 0.0}, state_with_delta(0.3));
  const TractorCommand right = b.update({0.5, 0.0}, state_with_delta(-0.3));
  CHECK(left.v == Approx(right.v).epsilon(1e-15));
  CHECK(left.omega == Approx(-right.omega).epsilon(1e-15));
  CHECK(left.v < 0.5);

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> dd(-1.5, 1.5);
  for (int i = 0; i < 200; ++i) {
    const double delta = dd(rng);
    HitchController ctl(p);
    const TractorCommand out = ctl.update({0.5, 0.0}, state_with_delta(delta));
    CHECK(std::abs(out.v) <= 0.5 + 1e-15);
    if (delta != 0.0) {
      CHECK(std::abs(out.v) < 0.5);
    }
  }
}

TEST_CASE("steering target stays within the mechanical limit") {
  const VehicleParams p;
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> dv(-2.0, 2.0), dw(-5.0, 5.0);
  for (int i = 0; i < 300; ++i) {
    const VelocityCommand cmd{dv(rng), dw(rng)};
    const auto sol = target_steering(cmd, p);
    if (!sol) continue;
    CHECK(std::abs(sol->delta_target) <= p.delta_max + 1e-15);
  }
}

TEST_CASE("actuator limits clamp the controller output") {
  const VehicleParams p;  // omega_max = 1, v_max = 0.8
  HitchController ctl(p);
  // Huge deviation: P-term 2 * ~1.98 would exceed omega_max.
  const TractorCommand out = ctl.update({1.0, 0.0}, state_with_delta(-1.2 - 0.78));
  CHECK(out.omega == Approx(p.omega_max));
  HitchController fast(p);
  const TractorCommand vcap = fast.update({5.0, 0.0}, state_with_delta(0.0));
  CHECK(vcap.v == Approx(p.v_max));
}

TEST_CASE("steering deviation is wrapped before use") {
  const VehicleParams p;
  HitchController ctl(p);
  // Target 0 with a wound-up hitch angle of 3*pi/2: the wrapped deviation is
  // +pi/2, so the controller unwinds the short way (positive omega).
  const TractorCommand out = ctl.update({0.5, 0.0}, state_with_delta(1.5 * kPi));
  CHECK(out.omega == Approx(std::min(p.Kp * 0.5 * kPi, p.omega_max)));
  CHECK(out.omega > 0.0);
  CHECK(out.v == Approx(0.5 * std::exp(-(0.25 * kPi * kPi) / (p.alpha * p.alpha))).epsilon(1e-12));
}

TEST_CASE("degenerate command holds the previous target and stops") {
  const VehicleParams p;
  HitchController ctl(p);
  ctl.update({0.8, 0.8}, state_with_delta(0.0));
  const double held = ctl.held_delta_target();
  CHECK(held == Approx(std::atan(1.0)));

  const TractorCommand out = ctl.update({0.0, 2.0}, state_with_delta(0.1));
  CHECK(out.v == 0.0);
  CHECK(ctl.held_delta_target() == Approx(held));
  CHECK(out.omega == Approx(std::min(p.Kp * (held - 0.1), p.omega_max)));

  // A stop command with no turn re-targets straight steering.
  ctl.update({0.0, 0.0}, state_with_delta(0.1));
  CHECK(ctl.held_delta_target() == 0.0);
}

TEST_CASE("closed loop drives the hitch angle to the held target") {
  const VehicleParams p;
  HitchController ctl(p);
  TrailerState s = state_with_delta(0.0);
  ctl.update({1.0, 1.0}, s);  // latch target atan(1) = pi/4
  const double target = ctl.held_delta_target();
  REQUIRE(target == Approx(kPi / 4.0));

  // Degenerate commands keep the target while the plant integrates ddelta =
  // omega exactly (v = 0), isolating the P-loop: with Kp * dt < 1 the
  // deviation must shrink strictly monotonically.
  const double dt = 0.02;
  REQUIRE(p.Kp * dt < 1.0);
  double prev = std::abs(target - s.delta);
  for (int i = 0; i < 600; ++i) {
    const TractorCommand out = ctl.update({0.0, 1.0}, s);
    CHECK(out.v == 0.0);
    s = step(s, out, dt, p);
    const double dev = std::abs(normalize_angle(target - s.delta));
    if (prev > 1e-9) CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 1e-6);
}
