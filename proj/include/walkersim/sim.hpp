#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "walkersim/controller.hpp"
#include "walkersim/errors.hpp"
#include "walkersim/gait_gen.hpp"
#include "walkersim/plant.hpp"
#include "walkersim/pwad.hpp"
#include "walkersim/rng.hpp"

namespace walkersim {

// One-shot forward shove on top of the sustained effort, on by default so a
// plain run always exercises disturbance rejection.
struct PushPulse {
  double start = 0.25;     // s
  double duration = 0.5;   // s
  double force = 20.0;     // N
};

struct UserModel {
  double sustained_force = 12.0;  // N while the walker drives
  PushPulse pulse;
};

inline void validate(const UserModel& u) {
  if (!std::isfinite(u.sustained_force) || u.sustained_force < 0.0)
    throw ConfigError("user.sustained_force", "must be finite and >= 0");
  if (!std::isfinite(u.pulse.force))
    throw ConfigError("user.pulse.force", "must be finite");
  if (u.pulse.duration < 0.0)
    throw ConfigError("user.pulse.duration", "must be >= 0");
  if (u.pulse.start < 0.0)
    throw ConfigError("user.pulse.start", "must be >= 0");
}

// Scheduled intervention. "stop" brakes immediately; "push" adds force for a
// window; "disturb" adds force from its instant onward.
struct TimelineEvent {
  double t = 0.0;
  std::string kind;
  double force = 0.0;
  double duration = 0.0;
};

inline void validate(const TimelineEvent& e, std::size_t index) {
  const std::string where = "timeline[" + std::to_string(index) + "]";
  if (!(e.t >= 0.0)) throw ConfigError(where + ".t", "must be >= 0");
  if (e.kind != "stop" && e.kind != "push" && e.kind != "disturb")
    throw ConfigError(where + ".kind",
                      "unknown command '" + e.kind + "' (stop, push, disturb)");
  if (e.kind == "push" && !(e.duration > 0.0))
    throw ConfigError(where + ".duration", "push needs a duration > 0");
  if (e.kind != "stop" && !std::isfinite(e.force))
    throw ConfigError(where + ".force", "must be finite");
}

struct ScenarioConfig {
  std::string name = "run";
  Condition condition = Condition::kA;
  double target_velocity = 0.5;   // m/s
  double target_distance = 8.0;   // m
  double dt = 0.01;               // s, physics step
  double control_period = 0.01;   // s, controller decision rate
  double max_duration = 120.0;    // s
  double velocity_noise_std = 0.002;
  WalkerParams walker;
  ControllerParams controller;
  ContactParams contact;
  MuscleParams muscle;
  GaitParams gait;
  UserModel user;
  std::vector<TimelineEvent> timeline;

  ScenarioConfig() { gait = condition_preset(condition); }
};

inline ScenarioConfig make_scenario(Condition c) {
  ScenarioConfig s;
  s.condition = c;
  s.gait = condition_preset(c);
  s.name = std::string("condition-") + condition_name(c);
  return s;
}

inline void validate(const ScenarioConfig& s) {
  if (!(s.target_velocity > 0.0))
    throw ConfigError("target_velocity", "must be > 0");
  if (!(s.target_distance > 0.0))
    throw ConfigError("target_distance", "must be > 0");
  if (!(s.dt > 0.0)) throw ConfigError("dt", "must be > 0");
  if (!(s.control_period > 0.0)) throw ConfigError("control_period", "must be > 0");
  const double ratio = s.control_period / s.dt;
  if (std::fabs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0 - 1e-9)
    throw ConfigError("control_period", "must be a whole multiple of dt");
  if (!(s.max_duration > 0.0)) throw ConfigError("max_duration", "must be > 0");
  if (s.velocity_noise_std < 0.0)
    throw ConfigError("velocity_noise_std", "must be >= 0");
  validate(s.walker);
  validate(s.controller);
  validate(s.contact);
  validate(s.muscle);
  validate(s.gait);
  validate(s.user);
  for (std::size_t i = 0; i < s.timeline.size(); ++i) validate(s.timeline[i], i);
}

struct TelemetryRow {
  std::int64_t tick = 0;
  double t = 0.0;
  Region region = Region::kPositiveNeutral;
  double tau_cmd = 0.0;
  double velocity = 0.0;
  double position = 0.0;
  double p_muscle = 0.0;
  bool valve = false;
  double f_left = 0.0;
  double f_right = 0.0;
};

struct SimEvent {
  double t = 0.0;
  std::string kind;
  std::string detail;
};

struct RunRecord {
  std::string name;
  Condition condition = Condition::kA;
  std::uint64_t seed = 0;
  bool completed = false;
  std::string termination;  // "completed" or "time_limit"
  double duration = 0.0;
  double final_position = 0.0;
  double distance_walked = 0.0;
  int step_count = 0;
  std::vector<TelemetryRow> telemetry;
  std::vector<SimEvent> events;
  GroundTruth truth;
};

// Closed-loop scenario. Per tick: subject gait forces driven by the previous
// tick's assist pressure, contact sensing and the pneumatic loop, the region
// state machine and torque command on control-period boundaries, then the
// plant update with the user's hand forces.
inline RunRecord run_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  RunRecord rec;
  rec.name = cfg.name;
  rec.condition = cfg.condition;
  rec.seed = seed;

  RngStream measure_rng(seed, "measure");
  RngStream gait_rng(seed, "gait");
  RngStream fog_rng(seed, "fog");

  WalkerState state;
  VelocityController vc;
  BrakeState brake;
  Region region = Region::kPositiveNeutral;
  double entry_t = 0.0;
  double entry_v = 0.0;

  ContactState contact;
  MuscleState muscle;
  const bool assisted = cfg.condition == Condition::kB;

  GaitSynthesizer gait(cfg.gait, cfg.target_distance, &gait_rng);
  const auto fog_schedule = inject_fog(cfg.gait, cfg.max_duration, fog_rng);

  const auto ctrl_every =
      static_cast<std::int64_t>(std::llround(cfg.control_period / cfg.dt));
  const auto max_ticks =
      static_cast<std::int64_t>(std::ceil(cfg.max_duration / cfg.dt));
  rec.telemetry.reserve(static_cast<std::size_t>(max_ticks));

  std::size_t next_timeline = 0;
  std::vector<TimelineEvent> sorted_timeline = cfg.timeline;
  std::stable_sort(sorted_timeline.begin(), sorted_timeline.end(),
                   [](const TimelineEvent& a, const TimelineEvent& b) {
                     return a.t < b.t;
                   });
  struct ForceWindow {
    double t0, t1, force;
  };
  std::vector<ForceWindow> force_windows;
  bool stop_commanded = false;

  auto log_event = [&](double t, const char* kind, std::string detail) {
    rec.events.push_back({t, kind, std::move(detail)});
  };

  double tau_cmd = 0.0;
  for (std::int64_t i = 0; i < max_ticks; ++i) {
    const double t = static_cast<double>(i) * cfg.dt;

    // Subject gait, driven by the pressure left standing at the end of the
    // previous tick.
    const double assist = assisted ? assist_gain(muscle, cfg.muscle) : 0.0;
    double f_left = 0.0, f_right = 0.0;
    if (gait.started() && !gait.done(t)) {
      auto s = gait.sample(t, assist);
      f_left = s.f_left;
      f_right = s.f_right;
    }

    // Contact sensing and the pneumatic loop. An unassisted run has no
    // actuator stage at all, so pressure stays identically zero.
    detect_contact(contact, f_left, cfg.dt, cfg.contact);
    if (assisted) {
      muscle.valve_open = valve_for_contact(contact.contact);
      pressure_step(muscle, muscle.valve_open, cfg.dt, cfg.muscle);
    }

    // Controller decisions on the control-period grid.
    if (i % ctrl_every == 0) {
      const double measured =
          measure_velocity(state, cfg.velocity_noise_std, measure_rng);

      while (next_timeline < sorted_timeline.size() &&
             sorted_timeline[next_timeline].t <= t + 1e-12) {
        const auto& ev = sorted_timeline[next_timeline];
        if (ev.kind == "stop") {
          if (region != Region::kBraked) {
            region = Region::kBraked;
            entry_t = t;
            entry_v = measured;
            brake_engage(brake, wheel_angle(state, cfg.walker), t);
            gait.halt();
            stop_commanded = true;
            log_event(t, "stop", "brake engaged");
          }
        } else if (ev.kind == "push") {
          force_windows.push_back({ev.t, ev.t + ev.duration, ev.force});
          log_event(t, "push", std::to_string(ev.force) + " N for " +
                                   std::to_string(ev.duration) + " s");
        } else {
          force_windows.push_back(
              {ev.t, std::numeric_limits<double>::infinity(), ev.force});
          log_event(t, "disturb", std::to_string(ev.force) + " N");
        }
        ++next_timeline;
      }

      if (region != Region::kBraked) {
        const Region next = region_transition(region, measured, state.position,
                                              cfg.target_distance,
                                              cfg.target_velocity, cfg.controller);
        if (next != region) {
          log_event(t, "region_change", std::string(region_name(region)) + " -> " +
                                            region_name(next));
          region = next;
          entry_t = t;
          entry_v = measured;
          if (region == Region::kAccelerating && !gait.started()) {
            gait.start(t, fog_schedule);
            log_event(t, "gait_started", "");
          }
        }
      }

      switch (region) {
        case Region::kAccelerating:
        case Region::kConstantVelocity:
        case Region::kDecelerating:
          vc.v_ref = region_setpoint(region, cfg.target_velocity, t - entry_t,
                                     entry_v, cfg.controller);
          velocity_control_step(vc, measured, cfg.controller);
          tau_cmd = commanded_torque(vc, cfg.controller);
          break;
        case Region::kPositiveNeutral:
        case Region::kNegativeNeutral:
          vc.v_ref = 0.0;
          torque_rampdown_step(vc, cfg.controller);
          tau_cmd = commanded_torque(vc, cfg.controller);
          break;
        case Region::kBraked:
          if (t - brake.last_cmd_t >= cfg.controller.brake_cmd_period - 1e-12) {
            brake_control_step(brake, wheel_angle(state, cfg.walker),
                               cfg.controller);
            brake.last_cmd_t = t;
          }
          break;
      }
    }

    if (region == Region::kBraked) {
      tau_cmd = brake_pd_torque(brake, wheel_angle(state, cfg.walker),
                                wheel_omega(state, cfg.walker),
                                cfg.walker.torque_limit, cfg.controller);
    }

    // Hand forces: sustained effort only while the drive is active, the
    // always-on shove, and any scheduled windows.
    double push = 0.0;
    const bool driving = region == Region::kAccelerating ||
                         region == Region::kConstantVelocity ||
                         region == Region::kDecelerating;
    if (driving) push += cfg.user.sustained_force;
    if (t >= cfg.user.pulse.start &&
        t < cfg.user.pulse.start + cfg.user.pulse.duration)
      push += cfg.user.pulse.force;
    for (const auto& w : force_windows)
      if (t >= w.t0 && t < w.t1) push += w.force;

    plant_step(state, tau_cmd, push, cfg.dt, cfg.walker);

    TelemetryRow row;
    row.tick = i;
    row.t = t;
    row.region = region;
    row.tau_cmd = tau_cmd;
    row.velocity = state.velocity;
    row.position = state.position;
    row.p_muscle = muscle.pressure;
    row.valve = muscle.valve_open;
    row.f_left = f_left;
    row.f_right = f_right;
    rec.telemetry.push_back(row);

    rec.duration = t + cfg.dt;
    if (!stop_commanded && region == Region::kNegativeNeutral &&
        std::fabs(state.velocity) < cfg.controller.stop_velocity &&
        gait.started() && gait.done(t + cfg.dt)) {
      rec.completed = true;
      rec.termination = "completed";
      log_event(t + cfg.dt, "run_complete", "");
      break;
    }
  }
  if (!rec.completed) {
    rec.termination = "time_limit";
    log_event(rec.duration, "time_limit", "stopped at max_duration");
  }
  for (; next_timeline < sorted_timeline.size(); ++next_timeline)
    log_event(rec.duration, "timeline_ignored",
              sorted_timeline[next_timeline].kind + " at t=" +
                  std::to_string(sorted_timeline[next_timeline].t));

  rec.final_position = state.position;
  rec.truth = gait.truth();
  rec.distance_walked = rec.truth.distance;
  rec.step_count = rec.truth.step_count;
  return rec;
}

}  // namespace walkersim
