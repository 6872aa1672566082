#pragma once

#include <algorithm>
#include <cmath>

#include "walkersim/errors.hpp"

namespace walkersim {

// Sole-mounted force sensor with hysteresis plus a debounce hold so chatter
// near a threshold cannot double-trigger within a step.
struct ContactParams {
  double on_threshold = 50.0;   // N
  double off_threshold = 30.0;  // N
  double debounce = 0.05;       // s
};

inline void validate(const ContactParams& p) {
  if (!(p.on_threshold > 0.0))
    throw ConfigError("contact.on_threshold", "must be > 0");
  if (!(p.off_threshold >= 0.0))
    throw ConfigError("contact.off_threshold", "must be >= 0");
  if (!(p.off_threshold < p.on_threshold))
    throw ConfigError("contact.off_threshold", "must be below on_threshold");
  if (p.debounce < 0.0) throw ConfigError("contact.debounce", "must be >= 0");
}

struct ContactState {
  bool contact = false;
  double time_in_state = 1e9;  // starts eligible to switch
};

enum class ContactEdge { kNone, kHeelStrike, kToeOff };

// Debounced hysteresis update for one sample. Edges are reported so callers
// can log them; the debounce clock freezes a new edge until the current state
// has been held long enough.
inline ContactEdge detect_contact(ContactState& s, double force, double dt,
                                  const ContactParams& p) {
  if (!std::isfinite(force)) throw NumericError("detect_contact: non-finite force");
  if (force < 0.0) throw NumericError("detect_contact: negative force");
  s.time_in_state += dt;
  if (!s.contact && force > p.on_threshold && s.time_in_state >= p.debounce) {
    s.contact = true;
    s.time_in_state = 0.0;
    return ContactEdge::kHeelStrike;
  }
  if (s.contact && force < p.off_threshold && s.time_in_state >= p.debounce) {
    s.contact = false;
    s.time_in_state = 0.0;
    return ContactEdge::kToeOff;
  }
  return ContactEdge::kNone;
}

// Pneumatic artificial muscle behind a fill/vent valve. Pressure follows a
// first-order lag toward the regulator cap while filling and toward zero
// while venting.
struct MuscleParams {
  double max_pressure = 0.3;  // MPa, regulator setting
  double fill_tau = 0.15;     // s
  double vent_tau = 0.25;     // s
};

inline void validate(const MuscleParams& p) {
  if (!(p.max_pressure > 0.0))
    throw ConfigError("muscle.max_pressure", "must be > 0");
  if (!(p.fill_tau > 0.0)) throw ConfigError("muscle.fill_tau", "must be > 0");
  if (!(p.vent_tau > 0.0)) throw ConfigError("muscle.vent_tau", "must be > 0");
}

struct MuscleState {
  double pressure = 0.0;  // MPa
  bool valve_open = false;
};

// The valve mirrors the debounced left-contact flag: fill on contact, vent on
// lift-off.
inline bool valve_for_contact(bool left_contact) { return left_contact; }

inline void pressure_step(MuscleState& m, bool valve_open, double dt,
                          const MuscleParams& p) {
  if (!(dt > 0.0)) throw NumericError("pressure_step: dt must be > 0");
  m.valve_open = valve_open;
  const double target = valve_open ? p.max_pressure : 0.0;
  const double tau = valve_open ? p.fill_tau : p.vent_tau;
  m.pressure += dt / tau * (target - m.pressure);
  m.pressure = std::clamp(m.pressure, 0.0, p.max_pressure);
}

// Normalized assist level, 0 at ambient and 1 at the regulator cap.
inline double assist_gain(const MuscleState& m, const MuscleParams& p) {
  return m.pressure / p.max_pressure;
}

}  // namespace walkersim
