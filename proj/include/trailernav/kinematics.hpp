#pragma once

#include <stdexcept>

#include "trailernav/footprint.hpp"
#include "trailernav/geometry.hpp"

namespace trailernav {

/// Physical and control parameters of the articulated vehicle. The defaults
/// describe a differential-drive tractor of roughly MiR100 size towing a
/// transport cart through a hitch on the tractor's rotation axis.
struct VehicleParams {
  double wheelbase_L = 1.0;    // hitch to trailer axle [m]
  double delta_max = 1.2;      // steering (hitch) angle limit [rad]
  double v_max = 0.8;          // [m/s]
  double omega_max = 1.0;      // [rad/s]
  double Kp = 2.0;             // steering P-gain [1/s]
  double alpha = 0.5;          // velocity gate width [rad]
  Footprint tractor_footprint = RectangleFootprint{0.70, 0.50, 0.0};
  Footprint trailer_footprint = RectangleFootprint{0.85, 0.55, 0.25};
  // Abort zone about the tractor center, slightly larger than the tractor
  // body: its circumradius plus 5 cm.
  double safety_radius = std::sqrt(0.35 * 0.35 + 0.25 * 0.25) + 0.05;
  // Extra margin added to the trailer body for global planning.
  double planning_inflation = 0.15;

  double kappa_max() const { return std::tan(delta_max) / wheelbase_L; }
  Footprint planning_footprint() const {
    return inflated(trailer_footprint, planning_inflation);
  }

  void validate() const {
    if (wheelbase_L <= 0.0) throw std::invalid_argument("wheelbase_L must be > 0");
    if (delta_max <= 0.0 || delta_max >= 0.5 * kPi)
      throw std::invalid_argument("delta_max must be in (0, pi/2)");
    if (v_max <= 0.0 || omega_max <= 0.0 || Kp <= 0.0 || alpha <= 0.0 || safety_radius <= 0.0)
      throw std::invalid_argument("v_max, omega_max, Kp, alpha, safety_radius must be > 0");
    if (planning_inflation < 0.0)
      throw std::invalid_argument("planning_inflation must be >= 0");
    trailernav::validate(tractor_footprint);
    trailernav::validate(trailer_footprint);
  }
};

/// Velocity command in the tractor frame (what the real robot would execute).
struct TractorCommand {
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s
};

/// Full articulated state. The trailer frame sits at the center of the axle
/// between the fixed caster wheels; the tractor center is the hitch point,
/// wheelbase_L ahead along the trailer heading. delta = tractor heading minus
/// trailer heading, in [-pi, pi).
struct TrailerState {
  Pose2D trailer_pose;
  double delta = 0.0;
  double v_tractor = 0.0;
  double omega_tractor = 0.0;
};

inline Pose2D derive_tractor_pose(const TrailerState& s, const VehicleParams& p) {
  const Vec2 h = unit_vector(s.trailer_pose.theta);
  return {s.trailer_pose.x + p.wheelbase_L * h.x, s.trailer_pose.y + p.wheelbase_L * h.y,
          normalize_angle(s.trailer_pose.theta + s.delta)};
}

/// Advances the state by one step of the explicit midpoint rule. The tractor
/// moves as a unicycle under (v, omega); the trailer heading follows the
/// on-axle hitch rolling constraint   Theta_dot = (v / L) * sin(psi - Theta).
/// Trailer position and delta are recomputed from the rigid coupling after
/// integration, so the redundant coordinates cannot drift apart.
inline TrailerState step(const TrailerState& s, const TractorCommand& cmd, double dt,
                         const VehicleParams& p) {
  if (!(dt > 0.0) || dt > 0.1)
    throw std::invalid_argument("step: dt must be in (0, 0.1]");

  const Pose2D tractor = derive_tractor_pose(s, p);
  // Integrated coordinates: tractor (x, y, psi) and trailer heading Theta.
  const double x0 = tractor.x, y0 = tractor.y, psi0 = tractor.theta;
  const double th0 = s.trailer_pose.theta;
  const double v = cmd.v, w = cmd.omega, L = p.wheelbase_L;

  // Midpoint stage.
  const double psi_m = psi0 + 0.5 * dt * w;
  const double th_m = th0 + 0.5 * dt * (v / L) * std::sin(psi0 - th0);

  const double x1 = x0 + dt * v * std::cos(psi_m);
  const double y1 = y0 + dt * v * std::sin(psi_m);
  const double psi1 = psi0 + dt * w;
  const double th1 = th0 + dt * (v / L) * std::sin(psi_m - th_m);

  TrailerState next;
  next.trailer_pose = {x1 - L * std::cos(th1), y1 - L * std::sin(th1), normalize_angle(th1)};
  next.delta = normalize_angle(psi1 - th1);
  next.v_tractor = v;
  next.omega_tractor = w;
  return next;
}

}  // namespace trailernav
