#pragma once

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "walkersim/errors.hpp"
#include "walkersim/sim.hpp"
#include "walkersim/stats.hpp"
#include "walkersim/version.hpp"

namespace walkersim {

using json = nlohmann::ordered_json;

namespace detail {

inline std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline void require_keys(const json& j, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError(join_path(path, it.key()), "unknown key");
  }
}

inline void load_num(const json& j, const std::string& path, const char* key,
                     double& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(join_path(path, key), "must be a number");
  out = v.get<double>();
}

inline void load_int(const json& j, const std::string& path, const char* key,
                     int& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(join_path(path, key), "must be an integer");
  out = v.get<int>();
}

inline void load_u64(const json& j, const std::string& path, const char* key,
                     std::uint64_t& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number_unsigned() && !v.is_number_integer())
    throw ConfigError(join_path(path, key), "must be a non-negative integer");
  if (v.is_number_integer() && v.get<std::int64_t>() < 0)
    throw ConfigError(join_path(path, key), "must be a non-negative integer");
  out = v.get<std::uint64_t>();
}

inline void load_str(const json& j, const std::string& path, const char* key,
                     std::string& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(join_path(path, key), "must be a string");
  out = v.get<std::string>();
}

inline const json* get_object(const json& j, const std::string& path,
                              const char* key) {
  if (!j.contains(key)) return nullptr;
  const auto& v = j.at(key);
  if (!v.is_object()) throw ConfigError(join_path(path, key), "must be an object");
  return &v;
}

}  // namespace detail

inline int schema_major(const std::string& version) {
  std::size_t dot = version.find('.');
  if (dot == std::string::npos || dot == 0)
    throw ConfigError("schema_version", "not a dotted version: '" + version + "'");
  try {
    return std::stoi(version.substr(0, dot));
  } catch (const std::exception&) {
    throw ConfigError("schema_version", "not a dotted version: '" + version + "'");
  }
}

inline void check_schema_version(const json& j, const std::string& path = "") {
  if (!j.contains("schema_version")) return;
  const auto& v = j.at("schema_version");
  if (!v.is_string())
    throw ConfigError(detail::join_path(path, "schema_version"), "must be a string");
  const int major = schema_major(v.get<std::string>());
  if (major != kSchemaMajor)
    throw ConfigError(detail::join_path(path, "schema_version"),
                      "major version " + std::to_string(major) +
                          " not supported (need " + std::to_string(kSchemaMajor) + ")");
}

// Overlay a JSON scenario object on top of cfg. Unknown keys anywhere are an
// error; so is a schema_version from a different major.
inline void apply_scenario_json(ScenarioConfig& cfg, const json& j,
                                const std::string& path = "",
                                bool allow_condition = true) {
  using namespace detail;
  require_keys(j, path,
               {"schema_version", "name", "condition", "seed", "target_velocity",
                "target_distance", "dt", "control_period", "max_duration",
                "velocity_noise_std", "walker", "controller", "contact", "muscle",
                "gait", "user", "timeline"});
  check_schema_version(j, path);
  if (j.contains("condition")) {
    if (!allow_condition)
      throw ConfigError(join_path(path, "condition"),
                        "condition is fixed by the batch, set it there");
    std::string c;
    load_str(j, path, "condition", c);
    cfg.condition = condition_from_name(c);
    cfg.gait = condition_preset(cfg.condition);
  }
  load_str(j, path, "name", cfg.name);
  load_num(j, path, "target_velocity", cfg.target_velocity);
  load_num(j, path, "target_distance", cfg.target_distance);
  load_num(j, path, "dt", cfg.dt);
  load_num(j, path, "control_period", cfg.control_period);
  load_num(j, path, "max_duration", cfg.max_duration);
  load_num(j, path, "velocity_noise_std", cfg.velocity_noise_std);

  if (const json* w = get_object(j, path, "walker")) {
    const std::string p = join_path(path, "walker");
    require_keys(*w, p,
                 {"wheel_radius", "mass", "rolling_resistance", "torque_limit",
                  "n_driven_wheels", "viscous_damping"});
    load_num(*w, p, "wheel_radius", cfg.walker.wheel_radius);
    load_num(*w, p, "mass", cfg.walker.mass);
    load_num(*w, p, "rolling_resistance", cfg.walker.rolling_resistance);
    load_num(*w, p, "torque_limit", cfg.walker.torque_limit);
    load_int(*w, p, "n_driven_wheels", cfg.walker.n_driven_wheels);
    load_num(*w, p, "viscous_damping", cfg.walker.viscous_damping);
  }
  if (const json* c = get_object(j, path, "controller")) {
    const std::string p = join_path(path, "controller");
    require_keys(*c, p,
                 {"deadband", "torque_step", "max_torque_steps", "v_start",
                  "stop_velocity", "a_dec", "decel_margin", "brake_kp", "brake_kd",
                  "brake_cmd_period", "brake_deadband"});
    load_num(*c, p, "deadband", cfg.controller.deadband);
    load_num(*c, p, "torque_step", cfg.controller.torque_step);
    load_int(*c, p, "max_torque_steps", cfg.controller.max_torque_steps);
    load_num(*c, p, "v_start", cfg.controller.v_start);
    load_num(*c, p, "stop_velocity", cfg.controller.stop_velocity);
    load_num(*c, p, "a_dec", cfg.controller.a_dec);
    load_num(*c, p, "decel_margin", cfg.controller.decel_margin);
    load_num(*c, p, "brake_kp", cfg.controller.brake_kp);
    load_num(*c, p, "brake_kd", cfg.controller.brake_kd);
    load_num(*c, p, "brake_cmd_period", cfg.controller.brake_cmd_period);
    load_num(*c, p, "brake_deadband", cfg.controller.brake_deadband);
  }
  if (const json* c = get_object(j, path, "contact")) {
    const std::string p = join_path(path, "contact");
    require_keys(*c, p, {"on_threshold", "off_threshold", "debounce"});
    load_num(*c, p, "on_threshold", cfg.contact.on_threshold);
    load_num(*c, p, "off_threshold", cfg.contact.off_threshold);
    load_num(*c, p, "debounce", cfg.contact.debounce);
  }
  if (const json* m = get_object(j, path, "muscle")) {
    const std::string p = join_path(path, "muscle");
    require_keys(*m, p, {"max_pressure", "fill_tau", "vent_tau"});
    load_num(*m, p, "max_pressure", cfg.muscle.max_pressure);
    load_num(*m, p, "fill_tau", cfg.muscle.fill_tau);
    load_num(*m, p, "vent_tau", cfg.muscle.vent_tau);
  }
  if (const json* g = get_object(j, path, "gait")) {
    const std::string p = join_path(path, "gait");
    require_keys(*g, p,
                 {"cadence", "stance_fraction_left", "stance_fraction_right",
                  "stride_length", "double_support_fraction", "peak_force",
                  "rise_time", "fall_time", "force_noise_std", "stance_jitter_std",
                  "period_jitter_std", "assist_stance_reduction",
                  "assist_stride_gain", "fog_rate", "fog_duration"});
    load_num(*g, p, "cadence", cfg.gait.cadence);
    load_num(*g, p, "stance_fraction_left", cfg.gait.stance_fraction_left);
    load_num(*g, p, "stance_fraction_right", cfg.gait.stance_fraction_right);
    load_num(*g, p, "stride_length", cfg.gait.stride_length);
    load_num(*g, p, "double_support_fraction", cfg.gait.double_support_fraction);
    load_num(*g, p, "peak_force", cfg.gait.peak_force);
    load_num(*g, p, "rise_time", cfg.gait.rise_time);
    load_num(*g, p, "fall_time", cfg.gait.fall_time);
    load_num(*g, p, "force_noise_std", cfg.gait.force_noise_std);
    load_num(*g, p, "stance_jitter_std", cfg.gait.stance_jitter_std);
    load_num(*g, p, "period_jitter_std", cfg.gait.period_jitter_std);
    load_num(*g, p, "assist_stance_reduction", cfg.gait.assist_stance_reduction);
    load_num(*g, p, "assist_stride_gain", cfg.gait.assist_stride_gain);
    load_num(*g, p, "fog_rate", cfg.gait.fog_rate);
    load_num(*g, p, "fog_duration", cfg.gait.fog_duration);
  }
  if (const json* u = get_object(j, path, "user")) {
    const std::string p = join_path(path, "user");
    require_keys(*u, p, {"sustained_force", "pulse"});
    load_num(*u, p, "sustained_force", cfg.user.sustained_force);
    if (const json* pl = get_object(*u, p, "pulse")) {
      const std::string pp = join_path(p, "pulse");
      require_keys(*pl, pp, {"start", "duration", "force"});
      load_num(*pl, pp, "start", cfg.user.pulse.start);
      load_num(*pl, pp, "duration", cfg.user.pulse.duration);
      load_num(*pl, pp, "force", cfg.user.pulse.force);
    }
  }
  if (j.contains("timeline")) {
    const auto& tl = j.at("timeline");
    if (!tl.is_array())
      throw ConfigError(join_path(path, "timeline"), "must be an array");
    cfg.timeline.clear();
    for (std::size_t i = 0; i < tl.size(); ++i) {
      const std::string p = join_path(path, "timeline[" + std::to_string(i) + "]");
      const auto& e = tl[i];
      if (!e.is_object()) throw ConfigError(p, "must be an object");
      require_keys(e, p, {"t", "kind", "force", "duration"});
      TimelineEvent ev;
      load_num(e, p, "t", ev.t);
      load_str(e, p, "kind", ev.kind);
      load_num(e, p, "force", ev.force);
      load_num(e, p, "duration", ev.duration);
      cfg.timeline.push_back(ev);
    }
  }
}

struct LoadedScenario {
  ScenarioConfig config;
  std::optional<std::uint64_t> seed;
};

inline LoadedScenario parse_scenario(const json& j) {
  if (!j.is_object()) throw ConfigError("", "scenario config must be a JSON object");
  LoadedScenario out;
  if (j.contains("condition")) {
    std::string c;
    detail::load_str(j, "", "condition", c);
    out.config = make_scenario(condition_from_name(c));
  }
  apply_scenario_json(out.config, j);
  if (j.contains("seed")) {
    std::uint64_t s = 0;
    detail::load_u64(j, "", "seed", s);
    out.seed = s;
  }
  validate(out.config);
  return out;
}

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(what, std::string("invalid JSON: ") + e.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline LoadedScenario load_scenario_file(const std::string& path) {
  return parse_scenario(parse_json_text(read_text_file(path), path));
}

struct BatchConfig {
  std::string name = "batch";
  int trials = 5;
  std::uint64_t base_seed = 1;
  std::vector<Condition> conditions = {Condition::kA, Condition::kB};
  json scenario_overlay = json::object();
  double alpha = 0.05;
  TTestVariant variant = TTestVariant::kStudent;
  int exclude_steps = 2;

  ScenarioConfig scenario_for(Condition c) const {
    ScenarioConfig cfg = make_scenario(c);
    apply_scenario_json(cfg, scenario_overlay, "scenario",
                        /*allow_condition=*/false);
    validate(cfg);
    return cfg;
  }
};

inline BatchConfig parse_batch(const json& j) {
  if (!j.is_object()) throw ConfigError("", "batch config must be a JSON object");
  detail::require_keys(j, "",
                       {"schema_version", "name", "trials", "base_seed",
                        "conditions", "alpha", "variant", "exclude_steps",
                        "scenario"});
  check_schema_version(j);
  BatchConfig b;
  detail::load_str(j, "", "name", b.name);
  detail::load_int(j, "", "trials", b.trials);
  if (b.trials < 2) throw ConfigError("trials", "need at least 2 trials");
  detail::load_u64(j, "", "base_seed", b.base_seed);
  detail::load_num(j, "", "alpha", b.alpha);
  if (!(b.alpha > 0.0) || !(b.alpha < 1.0))
    throw ConfigError("alpha", "must be in (0, 1)");
  detail::load_int(j, "", "exclude_steps", b.exclude_steps);
  if (b.exclude_steps < 0) throw ConfigError("exclude_steps", "must be >= 0");
  if (j.contains("variant")) {
    std::string v;
    detail::load_str(j, "", "variant", v);
    b.variant = t_test_variant_from_name(v);
  }
  if (j.contains("conditions")) {
    const auto& cs = j.at("conditions");
    if (!cs.is_array() || cs.empty())
      throw ConfigError("conditions", "must be a non-empty array");
    b.conditions.clear();
    for (const auto& c : cs) {
      if (!c.is_string()) throw ConfigError("conditions", "entries must be strings");
      b.conditions.push_back(condition_from_name(c.get<std::string>()));
    }
  }
  if (j.contains("scenario")) {
    if (!j.at("scenario").is_object())
      throw ConfigError("scenario", "must be an object");
    b.scenario_overlay = j.at("scenario");
  }
  // Surface overlay errors at parse time rather than first use.
  for (Condition c : b.conditions) (void)b.scenario_for(c);
  return b;
}

inline BatchConfig load_batch_file(const std::string& path) {
  return parse_batch(parse_json_text(read_text_file(path), path));
}

}  // namespace walkersim
