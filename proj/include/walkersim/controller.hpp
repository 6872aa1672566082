#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "walkersim/errors.hpp"

namespace walkersim {

// Motion profile regions. Forward-only during a normal run; Braked is
// reachable from anywhere on a STOP command and is terminal.
enum class Region {
  kPositiveNeutral,
  kAccelerating,
  kConstantVelocity,
  kDecelerating,
  kNegativeNeutral,
  kBraked,
};

inline const char* region_name(Region r) {
  switch (r) {
    case Region::kPositiveNeutral: return "PositiveNeutral";
    case Region::kAccelerating: return "Accelerating";
    case Region::kConstantVelocity: return "ConstantVelocity";
    case Region::kDecelerating: return "Decelerating";
    case Region::kNegativeNeutral: return "NegativeNeutral";
    case Region::kBraked: return "Braked";
  }
  return "?";
}

inline Region region_from_name(const std::string& name) {
  if (name == "PositiveNeutral") return Region::kPositiveNeutral;
  if (name == "Accelerating") return Region::kAccelerating;
  if (name == "ConstantVelocity") return Region::kConstantVelocity;
  if (name == "Decelerating") return Region::kDecelerating;
  if (name == "NegativeNeutral") return Region::kNegativeNeutral;
  if (name == "Braked") return Region::kBraked;
  throw ConfigError("region", "unknown region name '" + name + "'");
}

struct ControllerParams {
  double deadband = 0.05;        // m/s, strict on both sides
  double torque_step = 0.03;     // Nm per control tick
  int max_torque_steps = 166;    // anti-windup cap, 166 * 0.03 = 4.98 Nm
  double v_start = 0.05;         // m/s, exit from PositiveNeutral
  double stop_velocity = 0.005;  // m/s, entry into NegativeNeutral
  double a_dec = 0.25;           // m/s^2, both ramp rate and trigger estimate
  double decel_margin = 0.05;    // m, extra stopping distance in the trigger
  double brake_kp = 5.0;         // Nm/rad
  double brake_kd = 0.5;         // Nm*s/rad
  double brake_cmd_period = 0.2; // s between position-command updates
  double brake_deadband = 0.002; // rad, accumulation stops inside this error
};

inline void validate(const ControllerParams& p) {
  if (!(p.deadband > 0.0)) throw ConfigError("controller.deadband", "must be > 0");
  if (!(p.torque_step > 0.0)) throw ConfigError("controller.torque_step", "must be > 0");
  if (p.max_torque_steps < 1)
    throw ConfigError("controller.max_torque_steps", "must be >= 1");
  if (!(p.v_start > 0.0)) throw ConfigError("controller.v_start", "must be > 0");
  if (!(p.stop_velocity > 0.0))
    throw ConfigError("controller.stop_velocity", "must be > 0");
  if (!(p.a_dec > 0.0)) throw ConfigError("controller.a_dec", "must be > 0");
  if (p.decel_margin < 0.0)
    throw ConfigError("controller.decel_margin", "must be >= 0");
  if (!(p.brake_kp > 0.0)) throw ConfigError("controller.brake_kp", "must be > 0");
  if (p.brake_kd < 0.0) throw ConfigError("controller.brake_kd", "must be >= 0");
  if (!(p.brake_cmd_period > 0.0))
    throw ConfigError("controller.brake_cmd_period", "must be > 0");
  if (p.brake_deadband < 0.0)
    throw ConfigError("controller.brake_deadband", "must be >= 0");
}

// Incremental velocity regulator. The commanded torque is held as an integer
// number of steps so consecutive commands always differ by exactly one step
// or not at all.
struct VelocityController {
  int tau_steps = 0;
  double v_ref = 0.0;
};

inline double commanded_torque(const VelocityController& c, const ControllerParams& p) {
  return c.tau_steps * p.torque_step;
}

// One regulator update against the measured velocity. Holds inside the
// deadband, steps once outside it; equality at the boundary holds.
inline void velocity_control_step(VelocityController& c, double measured_v,
                                  const ControllerParams& p) {
  if (!std::isfinite(measured_v))
    throw NumericError("velocity_control_step: non-finite measurement");
  if (c.v_ref - measured_v > p.deadband) {
    c.tau_steps = std::min(c.tau_steps + 1, p.max_torque_steps);
  } else if (measured_v - c.v_ref > p.deadband) {
    c.tau_steps = std::max(c.tau_steps - 1, -p.max_torque_steps);
  }
}

// Neutral-region behaviour: walk the command back to zero one step per tick
// so the delta quantization holds across region changes.
inline void torque_rampdown_step(VelocityController& c, const ControllerParams&) {
  if (c.tau_steps > 0) {
    --c.tau_steps;
  } else if (c.tau_steps < 0) {
    ++c.tau_steps;
  }
}

// Reference velocity for a region. Decelerating ramps linearly from the
// velocity captured at region entry down to zero at a_dec.
inline double region_setpoint(Region r, double target_velocity, double time_in_region,
                              double entry_velocity, const ControllerParams& p) {
  switch (r) {
    case Region::kAccelerating:
    case Region::kConstantVelocity:
      return target_velocity;
    case Region::kDecelerating:
      return std::max(0.0, entry_velocity - p.a_dec * time_in_region);
    default:
      return 0.0;
  }
}

// Forward-only transition check, at most one edge per call. STOP -> Braked is
// handled by the caller since it can fire from any region.
inline Region region_transition(Region current, double measured_v, double position,
                                double target_distance, double target_velocity,
                                const ControllerParams& p) {
  switch (current) {
    case Region::kPositiveNeutral:
      if (measured_v > p.v_start) return Region::kAccelerating;
      break;
    case Region::kAccelerating:
      if (measured_v >= target_velocity - p.deadband) return Region::kConstantVelocity;
      break;
    case Region::kConstantVelocity: {
      const double remaining = target_distance - position;
      const double stopping =
          measured_v * measured_v / (2.0 * p.a_dec) + p.decel_margin;
      if (remaining <= stopping) return Region::kDecelerating;
      break;
    }
    case Region::kDecelerating:
      if (std::abs(measured_v) < p.stop_velocity) return Region::kNegativeNeutral;
      break;
    case Region::kNegativeNeutral:
    case Region::kBraked:
      break;
  }
  return current;
}

// Position-hold brake. p_cmd accumulates the remaining error against the
// reference captured at engagement; the plant-side actuator tracks p_cmd with
// a PD law. The accumulation runs at brake_cmd_period, not every tick: the
// actuator loop is far slower than the tick rate and per-tick accumulation
// double-counts the error into instability.
struct BrakeState {
  bool engaged = false;
  double p_ref = 0.0;   // rad
  double p_cmd = 0.0;   // rad
  double last_cmd_t = 0.0;
};

// Capture the hold target. Re-engaging replaces the previous hold.
inline void brake_engage(BrakeState& b, double wheel_angle_now, double t) {
  b.engaged = true;
  b.p_ref = wheel_angle_now;
  b.p_cmd = wheel_angle_now;
  b.last_cmd_t = t;
}

// One position-command accumulation: p <- p + (p_ref - b_prev).
inline void brake_control_step(BrakeState& b, double wheel_angle_prev,
                               const ControllerParams& p) {
  if (!b.engaged) throw StateError("brake_control_step: brake not engaged");
  if (!std::isfinite(wheel_angle_prev))
    throw NumericError("brake_control_step: non-finite feedback");
  // Accumulating against static friction inside an already acceptable error
  // only winds up a breakaway later; leave the command alone there.
  const double err = b.p_ref - wheel_angle_prev;
  if (std::fabs(err) > p.brake_deadband) b.p_cmd += err;
}

// Plant-side actuator law in position mode.
inline double brake_pd_torque(const BrakeState& b, double wheel_angle_now, double omega,
                              double torque_limit, const ControllerParams& p) {
  const double tau = p.brake_kp * (b.p_cmd - wheel_angle_now) - p.brake_kd * omega;
  return std::clamp(tau, -torque_limit, torque_limit);
}

}  // namespace walkersim
