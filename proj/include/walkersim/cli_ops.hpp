#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "walkersim/config_json.hpp"
#include "walkersim/csv.hpp"
#include "walkersim/gait_analysis.hpp"
#include "walkersim/log.hpp"
#include "walkersim/report.hpp"
#include "walkersim/sim.hpp"
#include "walkersim/stats.hpp"
#include "walkersim/svg_plot.hpp"

namespace walkersim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIncomplete = 3;

// Run the body and translate exceptions into an error object on stderr plus
// the documented exit code.
inline int guard_cli(const std::function<int()>& body) {
  auto emit = [](const char* type, const json& extra, const std::string& msg) {
    json j = {{"error", {{"type", type}, {"message", msg}}}};
    for (auto it = extra.begin(); it != extra.end(); ++it)
      j["error"][it.key()] = it.value();
    std::cerr << j.dump() << "\n";
  };
  try {
    return body();
  } catch (const ConfigError& e) {
    emit("config", {{"field", e.field()}}, e.what());
    return kExitConfig;
  } catch (const FormatError& e) {
    emit("format", {{"row", e.row()}}, e.what());
    return kExitConfig;
  } catch (const Error& e) {
    emit("runtime", json::object(), e.what());
    return kExitError;
  } catch (const std::exception& e) {
    emit("internal", json::object(), e.what());
    return kExitError;
  }
}

struct RunOutputs {
  RunRecord record;
  bool has_features = false;
  GaitFeatures features;
  std::string analysis_note;
};

inline RunOutputs execute_run(const ScenarioConfig& cfg, std::uint64_t seed,
                              int exclude_steps) {
  RunOutputs out;
  out.record = run_scenario(cfg, seed);
  try {
    auto traces = extract_force_traces(out.record.telemetry);
    out.features = analyze_trial(traces.left, traces.right, exclude_steps,
                                 out.record.distance_walked, cfg.contact);
    out.has_features = true;
  } catch (const InsufficientDataError& e) {
    out.analysis_note = e.what();
    log_warn(std::string("gait analysis skipped: ") + e.what());
  }
  return out;
}

inline void write_run_outputs(const std::string& dir, const RunOutputs& out) {
  std::filesystem::create_directories(dir);
  const auto base = std::filesystem::path(dir);
  write_telemetry_csv_file((base / "telemetry.csv").string(), out.record.telemetry);
  json meta = run_meta_json(out.record);
  if (out.has_features) meta["features"] = features_json(out.features);
  if (!out.analysis_note.empty()) meta["analysis_note"] = out.analysis_note;
  write_json_file((base / "run.json").string(), meta);
  write_text_file((base / "events.jsonl").string(), events_jsonl(out.record));
  if (out.has_features)
    write_json_file((base / "features.json").string(), features_json(out.features));
}

inline int cmd_run(const std::string& config_path, const std::string& out_dir,
                   std::optional<std::uint64_t> seed_flag, int exclude_steps) {
  LoadedScenario ls = load_scenario_file(config_path);
  const std::uint64_t seed = seed_flag ? *seed_flag : ls.seed.value_or(1);
  RunOutputs out = execute_run(ls.config, seed, exclude_steps);
  write_run_outputs(out_dir, out);
  if (out.has_features) {
    std::cout << run_summary_text(out.record, out.features);
  } else {
    std::cout << "run " << out.record.name << " (condition "
              << condition_name(out.record.condition) << ", seed " << seed << ")\n  "
              << (out.record.completed ? "completed" : "incomplete") << " after "
              << fixed2(out.record.duration)
              << " s; gait analysis unavailable: " << out.analysis_note << "\n";
  }
  std::cout << "outputs in " << out_dir << "\n";
  return out.record.completed ? kExitOk : kExitIncomplete;
}

struct TrialMetrics {
  Condition condition = Condition::kA;
  std::uint64_t seed = 0;
  bool completed = false;
  int step_count = 0;
  double cadence = 0.0;
  double stance_percent_left = 0.0;
  double stance_percent_right = 0.0;
  double stride_time_left = 0.0;
  double stride_time_right = 0.0;
  double distance_walked = 0.0;
  double duration = 0.0;
};

struct BatchResult {
  BatchConfig cfg;
  std::vector<TrialMetrics> trials;
  bool compared = false;
  std::map<std::string, ComparisonResult> comparisons;
  // Metrics with no defined test statistic (e.g. zero variance everywhere
  // with unequal means), keyed to the reason.
  std::map<std::string, std::string> untestable;
  bool any_incomplete = false;
};

namespace detail {

inline std::vector<double> metric_sample(const std::vector<TrialMetrics>& trials,
                                         Condition c,
                                         const std::function<void(const TrialMetrics&,
                                                                  std::vector<double>&)>&
                                             push) {
  std::vector<double> out;
  for (const auto& t : trials)
    if (t.condition == c) push(t, out);
  return out;
}

}  // namespace detail

inline BatchResult execute_batch(const BatchConfig& cfg) {
  BatchResult res;
  res.cfg = cfg;
  for (Condition c : cfg.conditions) {
    const ScenarioConfig scen = cfg.scenario_for(c);
    for (int i = 0; i < cfg.trials; ++i) {
      const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(i);
      RunOutputs out = execute_run(scen, seed, cfg.exclude_steps);
      if (!out.record.completed) res.any_incomplete = true;
      if (!out.has_features)
        throw InsufficientDataError("trial " + std::to_string(i) + " condition " +
                                    condition_name(c) +
                                    " produced no analyzable gait: " +
                                    out.analysis_note);
      TrialMetrics m;
      m.condition = c;
      m.seed = seed;
      m.completed = out.record.completed;
      m.step_count = out.record.step_count;
      m.cadence = out.features.cadence;
      m.stance_percent_left = out.features.left.stance_percent_mean;
      m.stance_percent_right = out.features.right.stance_percent_mean;
      m.stride_time_left = out.features.left.stride_time_mean;
      m.stride_time_right = out.features.right.stride_time_mean;
      m.distance_walked = out.record.distance_walked;
      m.duration = out.record.duration;
      res.trials.push_back(m);
    }
  }

  if (cfg.conditions.size() == 2 && cfg.conditions[0] != cfg.conditions[1]) {
    const Condition ca = cfg.conditions[0], cb = cfg.conditions[1];
    auto pooled_stance = [](const TrialMetrics& t, std::vector<double>& v) {
      v.push_back(t.stance_percent_left);
      v.push_back(t.stance_percent_right);
    };
    auto pooled_stride = [](const TrialMetrics& t, std::vector<double>& v) {
      v.push_back(t.stride_time_left);
      v.push_back(t.stride_time_right);
    };
    auto one_cadence = [](const TrialMetrics& t, std::vector<double>& v) {
      v.push_back(t.cadence);
    };
    auto one_steps = [](const TrialMetrics& t, std::vector<double>& v) {
      v.push_back(static_cast<double>(t.step_count));
    };
    const std::pair<std::string,
                    std::function<void(const TrialMetrics&, std::vector<double>&)>>
        metrics[] = {{"stance_percent", pooled_stance},
                     {"stride_time", pooled_stride},
                     {"cadence", one_cadence},
                     {"step_count", one_steps}};
    for (const auto& [name, push] : metrics) {
      auto sa = detail::metric_sample(res.trials, ca, push);
      auto sb = detail::metric_sample(res.trials, cb, push);
      try {
        res.comparisons[name] = compare_conditions(sa, sb, cfg.alpha, cfg.variant);
      } catch (const DegenerateSampleError& e) {
        res.untestable[name] = e.what();
      }
    }
    res.compared = true;
  }
  return res;
}

inline json batch_report_json(const BatchResult& res) {
  json conditions = json::array();
  for (Condition c : res.cfg.conditions) conditions.push_back(condition_name(c));
  json trials = json::array();
  for (const auto& t : res.trials) {
    trials.push_back({{"condition", condition_name(t.condition)},
                      {"seed", t.seed},
                      {"completed", t.completed},
                      {"step_count", t.step_count},
                      {"cadence", t.cadence},
                      {"stance_percent_left", t.stance_percent_left},
                      {"stance_percent_right", t.stance_percent_right},
                      {"stride_time_left", t.stride_time_left},
                      {"stride_time_right", t.stride_time_right},
                      {"distance_walked", t.distance_walked},
                      {"duration", t.duration}});
  }
  json j = {{"schema_version", kSchemaVersion},
            {"name", res.cfg.name},
            {"trials_per_condition", res.cfg.trials},
            {"base_seed", res.cfg.base_seed},
            {"conditions", conditions},
            {"alpha", res.cfg.alpha},
            {"variant", t_test_variant_name(res.cfg.variant)},
            {"exclude_steps", res.cfg.exclude_steps},
            {"per_trial", trials}};
  if (res.compared) {
    json cmp = json::object();
    for (const auto& [name, c] : res.comparisons) cmp[name] = comparison_json(c);
    j["comparisons"] = cmp;
    if (!res.untestable.empty()) {
      json un = json::object();
      for (const auto& [name, why] : res.untestable) un[name] = why;
      j["untestable"] = un;
    }
  }
  return j;
}

inline std::string batch_report_text(const BatchResult& res) {
  std::string out = "batch " + res.cfg.name + ": " + std::to_string(res.cfg.trials) +
                    " trials/condition, base seed " +
                    std::to_string(res.cfg.base_seed) + "\n";
  for (const auto& t : res.trials) {
    out += "  " + std::string(condition_name(t.condition)) + " seed " +
           std::to_string(t.seed) + ": steps " + std::to_string(t.step_count) +
           ", cadence " + fixed2(t.cadence) + ", stance% L/R " +
           fixed2(t.stance_percent_left) + "/" + fixed2(t.stance_percent_right) +
           (t.completed ? "" : " (incomplete)") + "\n";
  }
  if (res.compared) {
    for (const auto& [name, c] : res.comparisons)
      out += comparison_summary_text(name, c);
    for (const auto& [name, why] : res.untestable)
      out += name + ": no test statistic (" + why + ")\n";
  }
  return out;
}

namespace detail {

struct Agg {
  double mean = 0.0, sd = 0.0;
  int n = 0;
};

inline Agg aggregate(const std::vector<double>& v) {
  Agg a;
  a.n = static_cast<int>(v.size());
  if (v.empty()) return a;
  a.mean = walkersim::mean(v);
  a.sd = v.size() >= 2 ? sample_stddev(v) : 0.0;
  return a;
}

}  // namespace detail

// The four standard charts from per-trial metric rows.
inline std::map<std::string, std::string> batch_charts(
    const std::vector<TrialMetrics>& trials, const std::vector<Condition>& conds) {
  std::map<std::string, std::string> out;
  auto collect = [&](Condition c, auto getter) {
    std::vector<double> v;
    for (const auto& t : trials)
      if (t.condition == c) v.push_back(getter(t));
    return detail::aggregate(v);
  };
  auto group_label = [](Condition c) {
    return std::string("condition ") + condition_name(c);
  };

  std::vector<BarGroup> stance, stride, cadence, steps;
  for (Condition c : conds) {
    auto sl = collect(c, [](const TrialMetrics& t) { return t.stance_percent_left; });
    auto sr = collect(c, [](const TrialMetrics& t) { return t.stance_percent_right; });
    stance.push_back({group_label(c),
                      {{"left", sl.mean, sl.sd}, {"right", sr.mean, sr.sd}}});
    auto tl = collect(c, [](const TrialMetrics& t) { return t.stride_time_left; });
    auto tr = collect(c, [](const TrialMetrics& t) { return t.stride_time_right; });
    stride.push_back({group_label(c),
                      {{"left", tl.mean, tl.sd}, {"right", tr.mean, tr.sd}}});
    auto cd = collect(c, [](const TrialMetrics& t) { return t.cadence; });
    cadence.push_back({group_label(c), {{"cadence", cd.mean, cd.sd}}});
    auto sc = collect(c, [](const TrialMetrics& t) {
      return static_cast<double>(t.step_count);
    });
    steps.push_back({group_label(c), {{"steps", sc.mean, sc.sd}}});
  }
  out["stance_percent.svg"] =
      svg_bar_chart("Stance phase by condition", "stance %", stance);
  out["stride_time.svg"] = svg_bar_chart("Stride time by condition", "s", stride);
  out["cadence.svg"] = svg_bar_chart("Cadence by condition", "steps/min", cadence);
  out["step_count.svg"] = svg_bar_chart("Steps to finish by condition", "steps", steps);
  return out;
}

inline int cmd_batch(const std::string& config_path, const std::string& out_dir,
                     std::optional<std::uint64_t> seed_flag,
                     std::optional<std::string> variant_flag,
                     std::optional<int> exclude_flag) {
  BatchConfig cfg = load_batch_file(config_path);
  if (seed_flag) cfg.base_seed = *seed_flag;
  if (variant_flag) cfg.variant = t_test_variant_from_name(*variant_flag);
  if (exclude_flag) {
    if (*exclude_flag < 0) throw ConfigError("exclude_steps", "must be >= 0");
    cfg.exclude_steps = *exclude_flag;
  }
  BatchResult res = execute_batch(cfg);

  std::filesystem::create_directories(out_dir);
  const auto base = std::filesystem::path(out_dir);
  write_json_file((base / "report.json").string(), batch_report_json(res));
  const std::string text = batch_report_text(res);
  write_text_file((base / "report.txt").string(), text);
  for (const auto& [name, svg] : batch_charts(res.trials, res.cfg.conditions))
    write_text_file((base / name).string(), svg);
  std::cout << text;
  std::cout << "outputs in " << out_dir << "\n";
  return res.any_incomplete ? kExitIncomplete : kExitOk;
}

inline int cmd_analyze(const std::string& csv_path, const std::string& out_path,
                       int exclude_steps) {
  auto rows = read_telemetry_csv_file(csv_path);
  auto traces = extract_force_traces(rows);
  double path_length = 0.0;
  for (const auto& r : rows) path_length = std::max(path_length, r.position);
  GaitFeatures g = analyze_trial(traces.left, traces.right, exclude_steps, path_length);
  write_json_file(out_path, features_json(g));
  std::cout << "steps " << g.step_count << " (first " << g.exclude_steps
            << " excluded), cadence " << fixed2(g.cadence) << " steps/min\n"
            << "stance% left " << fixed2(g.left.stance_percent_mean) << " (sd "
            << fixed2(g.left.stance_percent_std) << "), right "
            << fixed2(g.right.stance_percent_mean) << " (sd "
            << fixed2(g.right.stance_percent_std) << ")\n"
            << "stride time left " << fixed4(g.left.stride_time_mean) << " s, right "
            << fixed4(g.right.stride_time_mean) << " s\n"
            << "features in " << out_path << "\n";
  return kExitOk;
}

inline int cmd_plot(const std::string& report_path, const std::string& out_dir) {
  const json j = parse_json_text(read_text_file(report_path), report_path);
  if (!j.is_object() || !j.contains("per_trial") || !j.at("per_trial").is_array())
    throw ConfigError("per_trial", "report has no per-trial table");
  check_schema_version(j);
  std::vector<TrialMetrics> trials;
  std::vector<Condition> conds;
  for (std::size_t i = 0; i < j.at("per_trial").size(); ++i) {
    const auto& e = j.at("per_trial")[i];
    const std::string p = "per_trial[" + std::to_string(i) + "]";
    if (!e.is_object()) throw ConfigError(p, "must be an object");
    for (const char* k :
         {"condition", "step_count", "cadence", "stance_percent_left",
          "stance_percent_right", "stride_time_left", "stride_time_right"})
      if (!e.contains(k)) throw ConfigError(p + "." + k, "missing");
    TrialMetrics m;
    m.condition = condition_from_name(e.at("condition").get<std::string>());
    m.step_count = e.at("step_count").get<int>();
    m.cadence = e.at("cadence").get<double>();
    m.stance_percent_left = e.at("stance_percent_left").get<double>();
    m.stance_percent_right = e.at("stance_percent_right").get<double>();
    m.stride_time_left = e.at("stride_time_left").get<double>();
    m.stride_time_right = e.at("stride_time_right").get<double>();
    trials.push_back(m);
    if (std::find(conds.begin(), conds.end(), m.condition) == conds.end())
      conds.push_back(m.condition);
  }
  if (trials.empty()) throw ConfigError("per_trial", "empty per-trial table");
  std::filesystem::create_directories(out_dir);
  const auto base = std::filesystem::path(out_dir);
  for (const auto& [name, svg] : batch_charts(trials, conds))
    write_text_file((base / name).string(), svg);
  std::cout << "charts in " << out_dir << "\n";
  return kExitOk;
}

}  // namespace walkersim
