#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "walkersim/errors.hpp"
#include "walkersim/rng.hpp"

namespace walkersim {

enum class Foot { kLeft, kRight };

inline const char* foot_name(Foot f) { return f == Foot::kLeft ? "left" : "right"; }

enum class Condition { kA, kB };

inline const char* condition_name(Condition c) { return c == Condition::kA ? "A" : "B"; }

inline Condition condition_from_name(const std::string& s) {
  if (s == "A" || s == "a") return Condition::kA;
  if (s == "B" || s == "b") return Condition::kB;
  throw ConfigError("condition", "must be A or B, got '" + s + "'");
}

struct GaitParams {
  double cadence = 50.0;                 // steps/min
  double stance_fraction_left = 0.58;
  double stance_fraction_right = 0.60;
  double stride_length = 1.2;            // m per full cycle
  double double_support_fraction = 0.16; // of the stride, both overlaps combined
  double peak_force = 700.0;             // N
  double rise_time = 0.05;               // s, loading ramp
  double fall_time = 0.05;               // s, unloading ramp
  double force_noise_std = 8.0;          // N per sample
  double stance_jitter_std = 0.003;      // per-stride, fraction units
  double period_jitter_std = 0.01;       // per-stride, relative
  double assist_stance_reduction = 0.02; // right stance fraction per unit gain
  double assist_stride_gain = 0.05;      // stride length scale per unit gain
  double fog_rate = 0.0;                 // episodes per minute
  double fog_duration = 1.0;             // s
};

inline void validate(const GaitParams& p) {
  if (!(p.cadence > 0.0)) throw ConfigError("gait.cadence", "must be > 0");
  if (!(p.stance_fraction_left > 0.5) || !(p.stance_fraction_left < 0.9))
    throw ConfigError("gait.stance_fraction_left", "must be in (0.5, 0.9)");
  if (!(p.stance_fraction_right > 0.5) || !(p.stance_fraction_right < 0.9))
    throw ConfigError("gait.stance_fraction_right", "must be in (0.5, 0.9)");
  if (!(p.stride_length > 0.0)) throw ConfigError("gait.stride_length", "must be > 0");
  if (!(p.double_support_fraction >= 0.0) ||
      !(p.double_support_fraction / 2.0 < p.stance_fraction_left))
    throw ConfigError("gait.double_support_fraction",
                      "must be >= 0 and below twice the left stance fraction");
  if (!(p.peak_force > 0.0)) throw ConfigError("gait.peak_force", "must be > 0");
  if (!(p.rise_time > 0.0)) throw ConfigError("gait.rise_time", "must be > 0");
  if (!(p.fall_time > 0.0)) throw ConfigError("gait.fall_time", "must be > 0");
  const double stride_period = 2.0 * 60.0 / p.cadence;
  if (p.rise_time + p.fall_time > 0.5 * stride_period)
    throw ConfigError("gait.rise_time", "ramps do not fit inside a stance phase");
  if (p.force_noise_std < 0.0)
    throw ConfigError("gait.force_noise_std", "must be >= 0");
  if (p.stance_jitter_std < 0.0)
    throw ConfigError("gait.stance_jitter_std", "must be >= 0");
  if (p.period_jitter_std < 0.0)
    throw ConfigError("gait.period_jitter_std", "must be >= 0");
  if (p.assist_stance_reduction < 0.0)
    throw ConfigError("gait.assist_stance_reduction", "must be >= 0");
  if (p.assist_stride_gain < 0.0)
    throw ConfigError("gait.assist_stride_gain", "must be >= 0");
  if (p.fog_rate < 0.0) throw ConfigError("gait.fog_rate", "must be >= 0");
  if (!(p.fog_duration > 0.0)) throw ConfigError("gait.fog_duration", "must be > 0");
}

// Condition presets. A walks unassisted (assist terms zeroed); B is identical
// except the assist terms are live.
inline GaitParams condition_preset(Condition c) {
  GaitParams p;
  if (c == Condition::kA) {
    p.assist_stance_reduction = 0.0;
    p.assist_stride_gain = 0.0;
  }
  return p;
}

// Uniformly sampled vertical-force trace for one foot.
struct FootForceTrace {
  Foot foot = Foot::kLeft;
  double dt = 0.01;
  double start_t = 0.0;
  std::vector<double> force;

  double time_at(std::size_t i) const { return start_t + static_cast<double>(i) * dt; }
};

// Everything the synthesizer actually used for one cycle, for recovery tests.
struct CycleTruth {
  int cycle = 0;
  double start_t = 0.0;
  double period = 0.0;          // s, including any freeze dilation
  double stance_left = 0.0;     // effective fraction
  double stance_right = 0.0;    // effective fraction
  double stride_length = 0.0;   // m, effective
  double assist_mean = 0.0;     // window applied to this cycle
  bool fog = false;
};

struct GroundTruth {
  std::vector<CycleTruth> cycles;
  int step_count = 0;
  double distance = 0.0;  // m accrued

  double mean_stance_left() const {
    double s = 0.0;
    for (const auto& c : cycles) s += c.stance_left;
    return cycles.empty() ? 0.0 : s / static_cast<double>(cycles.size());
  }
  double mean_stance_right() const {
    double s = 0.0;
    for (const auto& c : cycles) s += c.stance_right;
    return cycles.empty() ? 0.0 : s / static_cast<double>(cycles.size());
  }
};

struct FogEpisode {
  double t = 0.0;
  double duration = 0.0;
};

// Freeze episodes as a Poisson process over [0, horizon).
inline std::vector<FogEpisode> inject_fog(const GaitParams& p, double horizon,
                                          RngStream& rng) {
  std::vector<FogEpisode> out;
  if (p.fog_rate <= 0.0 || horizon <= 0.0) return out;
  const double rate_per_s = p.fog_rate / 60.0;
  double t = rng.exponential(rate_per_s);
  while (t < horizon) {
    out.push_back({t, p.fog_duration});
    t += rng.exponential(rate_per_s);
  }
  return out;
}

// Incremental stepper generating both foot-force traces. Cycles are planned
// one at a time at their start instant, so per-cycle parameters can depend on
// the live assist gain. Distance accrues half an effective stride per step;
// the trial stops scheduling at the first step that reaches the target.
class GaitSynthesizer {
 public:
  GaitSynthesizer(const GaitParams& params, double target_distance, RngStream* rng)
      : p_(params), target_(target_distance), rng_(rng) {
    validate(p_);
    if (!(target_distance > 0.0))
      throw ConfigError("target_distance", "must be > 0");
  }

  void start(double t, double fog_horizon = 240.0) {
    start(t, inject_fog(p_, fog_horizon, *rng_));
  }

  void start(double t, std::vector<FogEpisode> episodes) {
    if (started_) throw StateError("gait synthesizer already started");
    started_ = true;
    cycle_start_ = t;
    start_t_ = t;
    fog_ = std::move(episodes);
  }

  bool started() const { return started_; }

  // Stop scheduling further cycles; stances already placed run out.
  void halt() { halted_ = true; }

  bool done(double t) const {
    if (!started_) return false;
    return (finished_ || halted_) && t >= trace_end_;
  }

  double trace_end() const { return trace_end_; }

  // Forces at time t. assist is the live gain used both for window accounting
  // and for the very first cycle (which has no preceding stance).
  struct Sample {
    double f_left = 0.0;
    double f_right = 0.0;
  };
  Sample sample(double t, double assist) {
    if (!started_) return {};
    if (!finished_ && !halted_ && t >= cycle_start_ - 1e-12) plan_cycle(assist);
    Sample out;
    out.f_left = foot_force(t, left_stances_);
    out.f_right = foot_force(t, right_stances_);
    if (in_left_stance(t)) {
      assist_sum_ += assist;
      assist_n_ += 1;
    }
    if (p_.force_noise_std > 0.0) {
      out.f_left = std::max(0.0, out.f_left + rng_->normal(0.0, p_.force_noise_std));
      out.f_right = std::max(0.0, out.f_right + rng_->normal(0.0, p_.force_noise_std));
    }
    return out;
  }

  const GroundTruth& truth() const { return truth_; }

 private:
  struct Stance {
    double hs_t = 0.0;
    double duration = 0.0;
  };

  void plan_cycle(double live_assist) {
    const double nominal_period = 2.0 * 60.0 / p_.cadence;
    double period = nominal_period;
    if (p_.period_jitter_std > 0.0)
      period *= 1.0 + rng_->normal(0.0, p_.period_jitter_std);
    period = std::max(period, 0.25 * nominal_period);

    // Window for this cycle: mean assist over the preceding left stance, or
    // the live value when no stance has completed yet.
    double window;
    if (assist_n_ > 0) {
      window = assist_sum_ / static_cast<double>(assist_n_);
    } else {
      window = live_assist;
    }
    assist_sum_ = 0.0;
    assist_n_ = 0;

    double s_left = p_.stance_fraction_left;
    double s_right = p_.stance_fraction_right - p_.assist_stance_reduction * window;
    if (p_.stance_jitter_std > 0.0) {
      s_left += rng_->normal(0.0, p_.stance_jitter_std);
      s_right += rng_->normal(0.0, p_.stance_jitter_std);
    }
    s_left = std::clamp(s_left, 0.51, 0.89);
    s_right = std::clamp(s_right, 0.51, 0.89);
    double stride = p_.stride_length * (1.0 + p_.assist_stride_gain * window);

    bool fog = false;
    double dilation = 0.0;
    for (const auto& ep : fog_) {
      if (ep.t >= cycle_start_ - start_t_ &&
          ep.t < cycle_start_ - start_t_ + period) {
        fog = true;
        dilation += ep.duration;
      }
    }

    CycleTruth ct;
    ct.cycle = cycle_index_;
    ct.start_t = cycle_start_;
    ct.stance_left = s_left;
    ct.stance_right = s_right;
    ct.stride_length = stride;
    ct.assist_mean = window;
    ct.fog = fog;

    const double step_gain = fog ? 0.0 : stride / 2.0;
    double left_dur = s_left * period + dilation;
    double right_dur = s_right * period + dilation;
    const double right_offset =
        (p_.stance_fraction_left - p_.double_support_fraction / 2.0) * period;
    ct.period = period + dilation;

    // Left step.
    left_stances_.push_back({cycle_start_, left_dur});
    current_left_ = left_stances_.back();
    truth_.step_count += 1;
    truth_.distance += step_gain;
    if (truth_.distance >= target_) {
      finished_ = true;
      trace_end_ = std::max(trace_end_, cycle_start_ + left_dur + tail_);
      truth_.cycles.push_back(ct);
      return;
    }

    // Right step.
    right_stances_.push_back({cycle_start_ + right_offset + dilation, right_dur});
    truth_.step_count += 1;
    truth_.distance += step_gain;
    truth_.cycles.push_back(ct);
    const double right_end = cycle_start_ + right_offset + dilation + right_dur;
    trace_end_ = std::max(trace_end_, right_end + tail_);
    trace_end_ = std::max(trace_end_, cycle_start_ + left_dur + tail_);
    if (truth_.distance >= target_) {
      finished_ = true;
      return;
    }

    cycle_start_ += period + dilation;
    cycle_index_ += 1;
  }

  bool in_left_stance(double t) const {
    return t >= current_left_.hs_t && t < current_left_.hs_t + current_left_.duration;
  }

  double foot_force(double t, const std::vector<Stance>& stances) const {
    double f = 0.0;
    for (auto it = stances.rbegin(); it != stances.rend(); ++it) {
      const double tau = t - it->hs_t;
      if (tau < 0.0) continue;
      if (tau > it->duration) break;
      double v;
      if (tau < p_.rise_time) {
        v = p_.peak_force * tau / p_.rise_time;
      } else if (tau > it->duration - p_.fall_time) {
        v = p_.peak_force * (it->duration - tau) / p_.fall_time;
      } else {
        v = p_.peak_force;
      }
      f = std::max(f, v);
    }
    return f;
  }

  GaitParams p_;
  double target_;
  RngStream* rng_;
  bool started_ = false;
  bool finished_ = false;
  bool halted_ = false;
  double start_t_ = 0.0;
  double cycle_start_ = 0.0;
  int cycle_index_ = 0;
  double trace_end_ = 0.0;
  double tail_ = 0.25;  // s of zeros after the last unloading edge
  std::vector<Stance> left_stances_, right_stances_;
  Stance current_left_{0.0, -1.0};
  double assist_sum_ = 0.0;
  long assist_n_ = 0;
  std::vector<FogEpisode> fog_;
  GroundTruth truth_;
};

struct TrialTraces {
  FootForceTrace left;
  FootForceTrace right;
  GroundTruth truth;
};

// Standalone trial generation against a fixed per-tick assist stream. An
// empty stream means unassisted; a shorter stream holds its last value.
inline TrialTraces synthesize_trial(const GaitParams& params, double distance,
                                    double dt, const std::vector<double>& assist_stream,
                                    RngStream& rng) {
  if (!(dt > 0.0)) throw ConfigError("dt", "must be > 0");
  GaitSynthesizer g(params, distance, &rng);
  g.start(0.0);
  TrialTraces out;
  out.left.foot = Foot::kLeft;
  out.right.foot = Foot::kRight;
  out.left.dt = out.right.dt = dt;
  std::size_t i = 0;
  const std::size_t guard = static_cast<std::size_t>(3600.0 / dt);
  while (i < guard) {
    const double t = static_cast<double>(i) * dt;
    double assist = 0.0;
    if (!assist_stream.empty())
      assist = assist_stream[std::min(i, assist_stream.size() - 1)];
    auto s = g.sample(t, assist);
    out.left.force.push_back(s.f_left);
    out.right.force.push_back(s.f_right);
    ++i;
    if (g.done(static_cast<double>(i) * dt)) break;
  }
  out.truth = g.truth();
  return out;
}

}  // namespace walkersim
