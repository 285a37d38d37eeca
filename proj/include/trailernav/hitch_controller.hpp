#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "trailernav/kinematics.hpp"

namespace trailernav {

/// Velocity command in the bicycle frame (trailer axle): longitudinal speed
/// and heading rate of the virtual car-like vehicle.
struct VelocityCommand {
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s
};

struct SteeringSolution {
  double kappa = 0.0;         // requested path curvature [1/m]
  double delta_target = 0.0;  // steering target, clamped to +-delta_max
};

/// Below this speed the curvature kappa = omega / v is ill-conditioned and a
/// car-like vehicle cannot realize the turn anyway.
inline constexpr double kVelocityEpsilon = 1e-3;

inline double clamp_abs(double v, double limit) { return std::clamp(v, -limit, limit); }

/// Maps a bicycle-frame command to a steering target via the path curvature:
/// kappa = omega / v, delta = atan(L * kappa). Returns nullopt for the
/// degenerate turn-in-place request (|v| < eps with omega != 0).
inline std::optional<SteeringSolution> target_steering(const VelocityCommand& cmd,
                                                       const VehicleParams& p) {
  if (std::abs(cmd.v) < kVelocityEpsilon) {
    if (cmd.omega != 0.0) return std::nullopt;
    return SteeringSolution{0.0, 0.0};
  }
  const double kappa = cmd.omega / cmd.v;
  return SteeringSolution{kappa, clamp_abs(std::atan(p.wheelbase_L * kappa), p.delta_max)};
}

/// Steering P-control plus Gaussian velocity gating. Owns the steering target
/// held across degenerate (near-zero speed) commands; one instance belongs to
/// one simulation loop.
class HitchController {
 public:
  explicit HitchController(const VehicleParams& params) : params_(params) {}

  /// One control update:
  ///   omega' = Kp * wrap(delta_target - delta),  clamped to +-omega_max
  ///   v'     = v * exp(-wrap(ddelta)^2 / alpha^2), clamped to +-v_max
  /// The gate uses the wrapped deviation, so a full turn of wind-up does not
  /// freeze the vehicle. Gating happens before the hard actuator clamps.
  TractorCommand update(const VelocityCommand& cmd, const TrailerState& s) {
    double v_in = cmd.v;
    const auto sol = target_steering(cmd, params_);
    if (sol) {
      held_delta_target_ = sol->delta_target;
    } else {
      v_in = 0.0;  // car-like model cannot turn in place; steer toward the held target
    }
    const double ddelta = normalize_angle(held_delta_target_ - s.delta);
    const double omega_out = clamp_abs(params_.Kp * ddelta, params_.omega_max);
    const double gate = std::exp(-(ddelta * ddelta) / (params_.alpha * params_.alpha));
    const double v_out = clamp_abs(v_in * gate, params_.v_max);
    return {v_out, omega_out};
  }

  double held_delta_target() const { return held_delta_target_; }

 private:
  VehicleParams params_;
  double held_delta_target_ = 0.0;
};

}  // namespace trailernav
