#pragma once

#include <algorithm>
#include <cmath>

#include "walkersim/errors.hpp"
#include "walkersim/rng.hpp"

namespace walkersim {

inline constexpr double kGravity = 9.81;

// Longitudinal model of the walker frame: two driven wheels on a shared axle
// moving a lumped mass along a straight line. The viscous term stands in for
// the user's hand/arm coupling; without it the torque-step controller has no
// dissipation path and never settles.
struct WalkerParams {
  double wheel_radius = 0.075;       // m
  double mass = 12.0;                // kg, frame plus effective user coupling
  double rolling_resistance = 0.02;  // dimensionless
  double torque_limit = 1.2;         // Nm per actuator
  int n_driven_wheels = 2;
  double viscous_damping = 30.0;     // N*s/m
};

struct WalkerState {
  double position = 0.0;  // m
  double velocity = 0.0;  // m/s
};

inline void validate(const WalkerParams& p) {
  if (!(p.wheel_radius > 0.0)) throw ConfigError("plant.wheel_radius", "must be > 0");
  if (!(p.mass > 0.0)) throw ConfigError("plant.mass", "must be > 0");
  if (!(p.rolling_resistance >= 0.0))
    throw ConfigError("plant.rolling_resistance", "must be >= 0");
  if (!(p.torque_limit > 0.0)) throw ConfigError("plant.torque_limit", "must be > 0");
  if (p.n_driven_wheels < 1) throw ConfigError("plant.n_driven_wheels", "must be >= 1");
  if (!(p.viscous_damping >= 0.0))
    throw ConfigError("plant.viscous_damping", "must be >= 0");
}

inline double saturate_torque(double tau, const WalkerParams& p) {
  return std::clamp(tau, -p.torque_limit, p.torque_limit);
}

inline double wheel_angle(const WalkerState& s, const WalkerParams& p) {
  return s.position / p.wheel_radius;
}

inline double wheel_omega(const WalkerState& s, const WalkerParams& p) {
  return s.velocity / p.wheel_radius;
}

// Breakaway force: below this the walker stays parked.
inline double static_threshold(const WalkerParams& p) {
  return p.rolling_resistance * p.mass * kGravity;
}

// One semi-implicit Euler step. The commanded torque is saturated per
// actuator; rolling resistance is released for the breakaway tick and then
// opposes the motion direction while rolling.
inline void plant_step(WalkerState& s, double tau_cmd, double push_force,
                       double dt, const WalkerParams& p) {
  if (!std::isfinite(tau_cmd) || !std::isfinite(push_force))
    throw NumericError("plant_step: non-finite input");
  if (!(dt > 0.0)) throw NumericError("plant_step: dt must be > 0");

  const double tau = saturate_torque(tau_cmd, p);
  const double drive = p.n_driven_wheels * tau / p.wheel_radius;
  const double applied = drive + push_force;

  const bool at_rest = std::abs(s.velocity) < 1e-6;
  if (at_rest && std::abs(applied) <= static_threshold(p)) {
    s.velocity = 0.0;
    return;  // parked
  }

  double resist;
  if (at_rest) {
    resist = 0.0;  // breakaway tick
  } else {
    resist = p.rolling_resistance * p.mass * kGravity * (s.velocity > 0.0 ? 1.0 : -1.0);
  }
  const double accel =
      (applied - resist - p.viscous_damping * s.velocity) / p.mass;

  const double v0 = s.velocity;
  s.velocity = v0 + accel * dt;
  // Resistance must not push through zero and reverse the walker.
  if (v0 > 1e-6 && s.velocity < 0.0) s.velocity = 0.0;
  if (v0 < -1e-6 && s.velocity > 0.0) s.velocity = 0.0;
  s.position += s.velocity * dt;
}

// Encoder-style velocity measurement. noise_std == 0 returns the state value
// exactly and draws nothing from the stream.
inline double measure_velocity(const WalkerState& s, double noise_std, RngStream& rng) {
  if (noise_std < 0.0) throw NumericError("measure_velocity: noise_std must be >= 0");
  if (noise_std == 0.0) return s.velocity;
  return s.velocity + rng.normal(0.0, noise_std);
}

}  // namespace walkersim
