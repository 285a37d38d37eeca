#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "trailernav/trailernav.hpp"

using namespace trailernav;
using Catch::Approx;

TEST_CASE("normalize_angle maps into [-pi, pi) with pi excluded") {
  CHECK(normalize_angle(0.0) == 0.0);
  CHECK(normalize_angle(1.0) == Approx(1.0));
  CHECK(normalize_angle(-1.0) == Approx(-1.0));
  CHECK(normalize_angle(1.5 * kPi) == Approx(-0.5 * kPi));
  CHECK(normalize_angle(-1.5 * kPi) == Approx(0.5 * kPi));
  // Half-open interval: +pi wraps to -pi, -pi stays put.
  CHECK(normalize_angle(kPi) == Approx(-kPi));
  CHECK(normalize_angle(-kPi) == Approx(-kPi));
  CHECK(normalize_angle(3.0 * kPi) == Approx(-kPi));
}

TEST_CASE("normalize_angle is invariant under adding full turns") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_int_distribution<long long> turns(-1000000, 1000000);
  for (int i = 0; i < 200; ++i) {
    const double a = angle(rng);
    const double k = static_cast<double>(turns(rng));
    CHECK(normalize_angle(a + k * kTwoPi) == Approx(normalize_angle(a)).margin(1e-9));
  }
}

TEST_CASE("normalize_angle agrees with atan2 reconstruction") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-20.0, 20.0);
  for (int i = 0; i < 500; ++i) {
    const double a = angle(rng);
    const double n = normalize_angle(a);
    const double ref = std::atan2(std::sin(a), std::cos(a));
    // atan2 returns +pi on the branch cut where normalize_angle returns -pi.
    if (std::abs(std::abs(ref) - kPi) < 1e-9) {
      CHECK(std::abs(std::abs(n) - kPi) < 1e-9);
    } else {
      CHECK(n == Approx(ref).margin(1e-12));
    }
  }
}

TEST_CASE("Vec2 arithmetic, dot, cross, norm") {
  const Vec2 a{3.0, 4.0};
  const Vec2 b{-1.0, 2.0};
  CHECK((a + b).x == Approx(2.0));
  CHECK((a + b).y == Approx(6.0));
  CHECK((a - b).x == Approx(4.0));
  CHECK((a - b).y == Approx(2.0));
  CHECK((a * 2.0).x == Approx(6.0));
  CHECK(a.dot(b) == Approx(3.0 * -1.0 + 4.0 * 2.0));
  CHECK(a.cross(b) == Approx(3.0 * 2.0 - 4.0 * -1.0));
  CHECK(a.norm() == Approx(5.0));
  CHECK(a.squared_norm() == Approx(25.0));
}

TEST_CASE("Vec2 rotation preserves length and composes") {
  const Vec2 v{1.0, 0.0};
  const Vec2 r = v.rotated(0.5 * kPi);
  CHECK(r.x == Approx(0.0).margin(1e-15));
  CHECK(r.y == Approx(1.0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 100; ++i) {
    const Vec2 w{u(rng), u(rng)};
    const double a = u(rng), b = u(rng);
    CHECK(w.rotated(a).norm() == Approx(w.norm()).margin(1e-12));
    const Vec2 once = w.rotated(a + b);
    const Vec2 twice = w.rotated(a).rotated(b);
    CHECK(once.x == Approx(twice.x).margin(1e-9));
    CHECK(once.y == Approx(twice.y).margin(1e-9));
  }
}

TEST_CASE("unit_vector matches cos/sin") {
  for (double a : {0.0, 0.3, -2.1, kPi, -kPi, 5.0}) {
    const Vec2 u = unit_vector(a);
    CHECK(u.x == Approx(std::cos(a)));
    CHECK(u.y == Approx(std::sin(a)));
  }
}

TEST_CASE("Pose2D transform and inverse_transform round-trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const Pose2D pose{u(rng), u(rng), u(rng)};
    const Vec2 local{u(rng), u(rng)};
    const Vec2 world = pose.transform(local);
    const Vec2 back = pose.inverse_transform(world);
    CHECK(back.x == Approx(local.x).margin(1e-9));
    CHECK(back.y == Approx(local.y).margin(1e-9));
  }
}

TEST_CASE("Pose2D transform worked example") {
  const Pose2D pose{1.0, 2.0, 0.5 * kPi};
  const Vec2 world = pose.transform({1.0, 0.0});
  CHECK(world.x == Approx(1.0).margin(1e-12));
  CHECK(world.y == Approx(3.0).margin(1e-12));
  const Vec2 local = pose.inverse_transform({1.0, 3.0});
  CHECK(local.x == Approx(1.0).margin(1e-12));
  CHECK(local.y == Approx(0.0).margin(1e-12));
}

TEST_CASE("heading_distance is a symmetric wrapped metric in [0, pi]") {
  CHECK(heading_distance(0.0, 0.0) == 0.0);
  CHECK(heading_distance(0.1, -0.1) == Approx(0.2));
  CHECK(heading_distance(kPi - 0.05, -kPi + 0.05) == Approx(0.1));
  CHECK(heading_distance(0.0, kPi) == Approx(kPi));
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng), b = u(rng);
    const double d = heading_distance(a, b);
    CHECK(d >= 0.0);
    CHECK(d <= kPi + 1e-12);
    CHECK(d == Approx(heading_distance(b, a)).margin(1e-12));
  }
}

TEST_CASE("distance overloads") {
  CHECK(distance(Vec2{0.0, 0.0}, Vec2{3.0, 4.0}) == Approx(5.0));
  CHECK(distance(Pose2D{0.0, 0.0, 1.0}, Pose2D{3.0, 4.0, -2.0}) == Approx(5.0));
}
