#pragma once

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "walkersim/config_json.hpp"
#include "walkersim/gait_analysis.hpp"
#include "walkersim/sim.hpp"
#include "walkersim/stats.hpp"
#include "walkersim/version.hpp"

namespace walkersim {

inline json truth_json(const GroundTruth& t) {
  json cycles = json::array();
  for (const auto& c : t.cycles) {
    cycles.push_back({{"cycle", c.cycle},
                      {"start_t", c.start_t},
                      {"period", c.period},
                      {"stance_left", c.stance_left},
                      {"stance_right", c.stance_right},
                      {"stride_length", c.stride_length},
                      {"assist_mean", c.assist_mean},
                      {"fog", c.fog}});
  }
  return {{"cycles", cycles},
          {"step_count", t.step_count},
          {"distance", t.distance}};
}

inline json run_meta_json(const RunRecord& r) {
  return {{"schema_version", kSchemaVersion},
          {"name", r.name},
          {"condition", condition_name(r.condition)},
          {"seed", r.seed},
          {"completed", r.completed},
          {"termination", r.termination},
          {"duration", r.duration},
          {"final_position", r.final_position},
          {"distance_walked", r.distance_walked},
          {"step_count", r.step_count},
          {"ticks", r.telemetry.size()},
          {"truth", truth_json(r.truth)}};
}

inline json foot_features_json(const FootFeatures& f) {
  return {{"n_strides", f.n_strides},
          {"stride_time_mean", f.stride_time_mean},
          {"stride_time_std", f.stride_time_std},
          {"stance_time_mean", f.stance_time_mean},
          {"stance_time_std", f.stance_time_std},
          {"stance_percent_mean", f.stance_percent_mean},
          {"stance_percent_std", f.stance_percent_std},
          {"swing_percent_mean", f.swing_percent_mean}};
}

inline json features_json(const GaitFeatures& g) {
  return {{"schema_version", kSchemaVersion},
          {"left", foot_features_json(g.left)},
          {"right", foot_features_json(g.right)},
          {"step_count", g.step_count},
          {"exclude_steps", g.exclude_steps},
          {"gait_duration", g.gait_duration},
          {"gait_duration_analyzed", g.gait_duration_analyzed},
          {"cadence", g.cadence},
          {"est_stride_length", g.est_stride_length}};
}

inline json sw_json(const SwResult& s) { return {{"w", s.w}, {"p", s.p}}; }

inline json ttest_json(const TTestResult& t) {
  return {{"variant", t_test_variant_name(t.variant)},
          {"t", t.t},
          {"df", t.df},
          {"p", t.p}};
}

inline json comparison_json(const ComparisonResult& c) {
  json j = {{"n_a", c.n_a},
            {"n_b", c.n_b},
            {"mean_a", c.mean_a},
            {"mean_b", c.mean_b},
            {"sd_a", c.sd_a},
            {"sd_b", c.sd_b},
            {"alpha", c.alpha},
            {"t_test", ttest_json(c.test)},
            {"significant", c.significant},
            {"normality_checked", c.normality_checked}};
  if (c.normality_checked) {
    j["shapiro_a"] = sw_json(c.sw_a);
    j["shapiro_b"] = sw_json(c.sw_b);
    j["normal_a"] = c.normal_a;
    j["normal_b"] = c.normal_b;
  }
  return j;
}

inline std::string events_jsonl(const RunRecord& r) {
  std::string out;
  for (const auto& e : r.events) {
    json j = {{"t", e.t}, {"kind", e.kind}};
    if (!e.detail.empty()) j["detail"] = e.detail;
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(0, "cannot open for writing: " + path);
  out << text;
  if (!out) throw FormatError(0, "write failed: " + path);
}

inline void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

inline std::string fixed2(double v) {
  std::ostringstream ss;
  ss.imbue(std::locale::classic());
  ss << std::fixed << std::setprecision(2) << v;
  return ss.str();
}

inline std::string fixed4(double v) {
  std::ostringstream ss;
  ss.imbue(std::locale::classic());
  ss << std::fixed << std::setprecision(4) << v;
  return ss.str();
}

inline std::string run_summary_text(const RunRecord& r, const GaitFeatures& g) {
  std::ostringstream ss;
  ss << "run " << r.name << " (condition " << condition_name(r.condition) << ", seed "
     << r.seed << ")\n";
  ss << "  " << (r.completed ? "completed" : "incomplete (" + r.termination + ")")
     << " after " << fixed2(r.duration) << " s, " << fixed2(r.final_position)
     << " m driven\n";
  ss << "  steps " << r.step_count << ", subject distance "
     << fixed2(r.distance_walked) << " m, cadence " << fixed2(g.cadence)
     << " steps/min\n";
  ss << "  stance% left " << fixed2(g.left.stance_percent_mean) << " (sd "
     << fixed2(g.left.stance_percent_std) << "), right "
     << fixed2(g.right.stance_percent_mean) << " (sd "
     << fixed2(g.right.stance_percent_std) << ")\n";
  return ss.str();
}

inline std::string comparison_summary_text(const std::string& metric,
                                           const ComparisonResult& c) {
  std::ostringstream ss;
  ss << metric << ": A " << fixed4(c.mean_a) << " (sd " << fixed4(c.sd_a) << ", n "
     << c.n_a << ") vs B " << fixed4(c.mean_b) << " (sd " << fixed4(c.sd_b) << ", n "
     << c.n_b << ")\n";
  if (c.normality_checked) {
    ss << "  shapiro-wilk: A W=" << fixed4(c.sw_a.w) << " p=" << fixed4(c.sw_a.p)
       << (c.normal_a ? "" : " (non-normal)") << ", B W=" << fixed4(c.sw_b.w)
       << " p=" << fixed4(c.sw_b.p) << (c.normal_b ? "" : " (non-normal)") << "\n";
  }
  ss << "  " << t_test_variant_name(c.test.variant) << " t=" << fixed4(c.test.t)
     << " df=" << fixed4(c.test.df) << " p=" << fixed4(c.test.p) << " -> "
     << (c.significant ? "significant" : "not significant") << " at alpha "
     << fixed2(c.alpha) << "\n";
  return ss.str();
}

}  // namespace walkersim
