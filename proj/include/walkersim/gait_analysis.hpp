#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "walkersim/errors.hpp"
#include "walkersim/gait_gen.hpp"
#include "walkersim/pwad.hpp"

namespace walkersim {

enum class GaitEventType { kHeelStrike, kToeOff };

inline const char* gait_event_name(GaitEventType t) {
  return t == GaitEventType::kHeelStrike ? "heel_strike" : "toe_off";
}

struct GaitEvent {
  double t = 0.0;
  Foot foot = Foot::kLeft;
  GaitEventType type = GaitEventType::kHeelStrike;
};

// Hysteresis event detection on a sampled force trace. Crossing instants are
// linearly interpolated between samples, so event timing is not quantized to
// the sample grid. Debounce freezes further edges for its window, matching
// the online contact detector.
inline std::vector<GaitEvent> detect_events(const std::vector<double>& force,
                                            double dt, double start_t, Foot foot,
                                            const ContactParams& cp = {}) {
  validate(cp);
  if (!(dt > 0.0)) throw ConfigError("dt", "must be > 0");
  std::vector<GaitEvent> out;
  if (force.empty()) return out;
  for (double f : force) {
    if (!std::isfinite(f)) throw NumericError("non-finite force sample");
    if (f < 0.0) throw NumericError("negative force sample");
  }
  bool contact = force[0] > cp.on_threshold;
  if (contact) out.push_back({start_t, foot, GaitEventType::kHeelStrike});
  double time_in_state = cp.debounce;
  for (std::size_t i = 1; i < force.size(); ++i) {
    const double prev = force[i - 1];
    const double cur = force[i];
    time_in_state += dt;
    if (!contact && prev <= cp.on_threshold && cur > cp.on_threshold) {
      if (time_in_state >= cp.debounce) {
        const double frac = (cp.on_threshold - prev) / (cur - prev);
        out.push_back({start_t + (static_cast<double>(i - 1) + frac) * dt, foot,
                       GaitEventType::kHeelStrike});
        contact = true;
        time_in_state = 0.0;
      }
    } else if (contact && prev >= cp.off_threshold && cur < cp.off_threshold) {
      if (time_in_state >= cp.debounce) {
        const double frac = (prev - cp.off_threshold) / (prev - cur);
        out.push_back({start_t + (static_cast<double>(i - 1) + frac) * dt, foot,
                       GaitEventType::kToeOff});
        contact = false;
        time_in_state = 0.0;
      }
    }
  }
  return out;
}

inline std::vector<GaitEvent> detect_events(const FootForceTrace& trace,
                                            const ContactParams& cp = {}) {
  return detect_events(trace.force, trace.dt, trace.start_t, trace.foot, cp);
}

inline std::vector<GaitEvent> merge_events(std::vector<GaitEvent> a,
                                           const std::vector<GaitEvent>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::stable_sort(a.begin(), a.end(),
                   [](const GaitEvent& x, const GaitEvent& y) { return x.t < y.t; });
  return a;
}

// One full gait cycle of one foot: heel strike to the next heel strike of the
// same foot, with the toe off in between.
struct Stride {
  Foot foot = Foot::kLeft;
  double start_t = 0.0;
  double stride_time = 0.0;
  double stance_time = 0.0;
  bool excluded = false;

  double stance_percent() const { return 100.0 * stance_time / stride_time; }
};

namespace detail {

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace detail

// Segment per-foot strides from a merged event sequence. Events of each foot
// must alternate heel strike / toe off; the trailing incomplete cycle is
// dropped. Strides whose starting heel strike falls among the first
// exclude_steps heel strikes overall are marked excluded.
inline std::vector<Stride> segment_strides(const std::vector<GaitEvent>& events,
                                           int exclude_steps = 0) {
  if (exclude_steps < 0) throw ConfigError("exclude_steps", "must be >= 0");
  // Chronological heel-strike rank across both feet.
  std::vector<double> hs_times;
  for (const auto& e : events)
    if (e.type == GaitEventType::kHeelStrike) hs_times.push_back(e.t);
  std::sort(hs_times.begin(), hs_times.end());
  const double exclude_before =
      static_cast<std::size_t>(exclude_steps) < hs_times.size()
          ? hs_times[static_cast<std::size_t>(exclude_steps)]
          : std::numeric_limits<double>::infinity();

  std::vector<Stride> out;
  for (Foot foot : {Foot::kLeft, Foot::kRight}) {
    std::vector<const GaitEvent*> seq;
    for (const auto& e : events)
      if (e.foot == foot) seq.push_back(&e);
    for (std::size_t i = 1; i < seq.size(); ++i) {
      if (seq[i]->type == seq[i - 1]->type)
        throw EventSequenceError(i, std::string("repeated ") +
                                        gait_event_name(seq[i]->type) + " on " +
                                        foot_name(foot) + " foot");
    }
    if (!seq.empty() && seq[0]->type != GaitEventType::kHeelStrike)
      seq.erase(seq.begin());
    // seq now alternates HS, TO, HS, TO, ...
    for (std::size_t i = 0; i + 2 < seq.size(); i += 2) {
      const GaitEvent* hs = seq[i];
      const GaitEvent* to = seq[i + 1];
      const GaitEvent* next_hs = seq[i + 2];
      Stride s;
      s.foot = foot;
      s.start_t = hs->t;
      s.stride_time = next_hs->t - hs->t;
      s.stance_time = to->t - hs->t;
      if (!(s.stride_time > 0.0) || !(s.stance_time > 0.0) ||
          s.stance_time >= s.stride_time)
        throw EventSequenceError(i, "degenerate stride timing");
      s.excluded = hs->t < exclude_before;
      out.push_back(s);
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Stride& a, const Stride& b) { return a.start_t < b.start_t; });
  return out;
}

struct FootFeatures {
  int n_strides = 0;
  double stride_time_mean = 0.0;
  double stride_time_std = 0.0;
  double stance_time_mean = 0.0;
  double stance_time_std = 0.0;
  double stance_percent_mean = 0.0;
  double stance_percent_std = 0.0;
  double swing_percent_mean = 0.0;
};

struct GaitFeatures {
  FootFeatures left;
  FootFeatures right;
  int step_count = 0;            // heel strikes, before exclusion
  int exclude_steps = 0;
  double gait_duration = 0.0;    // first to last event, before exclusion
  double gait_duration_analyzed = 0.0;  // first retained stride start to last event
  double cadence = 0.0;          // steps per minute
  double est_stride_length = 0.0;  // from path length, 0 when unknown
};

inline FootFeatures summarize_foot(const std::vector<Stride>& strides, Foot foot) {
  std::vector<double> stride_t, stance_t, stance_pct;
  for (const auto& s : strides) {
    if (s.foot != foot || s.excluded) continue;
    stride_t.push_back(s.stride_time);
    stance_t.push_back(s.stance_time);
    stance_pct.push_back(s.stance_percent());
  }
  FootFeatures f;
  f.n_strides = static_cast<int>(stride_t.size());
  if (f.n_strides == 0)
    throw InsufficientDataError(std::string("no complete strides for ") +
                                foot_name(foot) + " foot");
  f.stride_time_mean = detail::mean_of(stride_t);
  f.stride_time_std = detail::sample_std(stride_t);
  f.stance_time_mean = detail::mean_of(stance_t);
  f.stance_time_std = detail::sample_std(stance_t);
  f.stance_percent_mean = detail::mean_of(stance_pct);
  f.stance_percent_std = detail::sample_std(stance_pct);
  f.swing_percent_mean = 100.0 - f.stance_percent_mean;
  return f;
}

inline GaitFeatures compute_features(const std::vector<GaitEvent>& events,
                                     int exclude_steps = 0,
                                     double path_length = 0.0) {
  if (events.empty()) throw InsufficientDataError("no gait events");
  auto strides = segment_strides(events, exclude_steps);
  GaitFeatures g;
  g.exclude_steps = exclude_steps;
  g.left = summarize_foot(strides, Foot::kLeft);
  g.right = summarize_foot(strides, Foot::kRight);
  for (const auto& e : events)
    if (e.type == GaitEventType::kHeelStrike) g.step_count += 1;
  g.gait_duration = events.back().t - events.front().t;
  double first_kept = events.back().t;
  bool any_kept = false;
  for (const auto& s : strides) {
    if (!s.excluded) {
      first_kept = std::min(first_kept, s.start_t);
      any_kept = true;
    }
  }
  g.gait_duration_analyzed = any_kept ? events.back().t - first_kept : 0.0;
  if (g.gait_duration > 0.0)
    g.cadence = 60.0 * static_cast<double>(g.step_count) / g.gait_duration;
  if (path_length > 0.0 && g.step_count > 0)
    g.est_stride_length = 2.0 * path_length / static_cast<double>(g.step_count);
  return g;
}

inline GaitFeatures analyze_trial(const FootForceTrace& left,
                                  const FootForceTrace& right,
                                  int exclude_steps = 0, double path_length = 0.0,
                                  const ContactParams& cp = {}) {
  auto ev = merge_events(detect_events(left, cp), detect_events(right, cp));
  return compute_features(ev, exclude_steps, path_length);
}

}  // namespace walkersim
