#include <sstream>
#include <string>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "walkersim/config_json.hpp"
#include "walkersim/csv.hpp"
#include "walkersim/report.hpp"
#include "walkersim/sim.hpp"
#include "walkersim/svg_plot.hpp"

using namespace walkersim;

TEST_CASE("telemetry csv round trips byte for byte") {
  auto cfg = make_scenario(Condition::kB);
  cfg.max_duration = 6.0;
  auto rec = run_scenario(cfg, 11);

  std::ostringstream first;
  write_telemetry_csv(first, rec.telemetry);
  std::istringstream back(first.str());
  auto rows = read_telemetry_csv(back);

  REQUIRE(rows.size() == rec.telemetry.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i].tick == rec.telemetry[i].tick);
    REQUIRE(rows[i].t == rec.telemetry[i].t);
    REQUIRE(rows[i].region == rec.telemetry[i].region);
    REQUIRE(rows[i].tau_cmd == rec.telemetry[i].tau_cmd);
    REQUIRE(rows[i].velocity == rec.telemetry[i].velocity);
    REQUIRE(rows[i].position == rec.telemetry[i].position);
    REQUIRE(rows[i].p_muscle == rec.telemetry[i].p_muscle);
    REQUIRE(rows[i].valve == rec.telemetry[i].valve);
    REQUIRE(rows[i].f_left == rec.telemetry[i].f_left);
    REQUIRE(rows[i].f_right == rec.telemetry[i].f_right);
  }

  std::ostringstream second;
  write_telemetry_csv(second, rows);
  REQUIRE(first.str() == second.str());
}

TEST_CASE("telemetry csv rejects malformed input") {
  auto row = [](const std::string& tail) {
    return std::string(kTelemetryHeader) + "\n" + tail + "\n";
  };
  auto read = [](const std::string& text) {
    std::istringstream in(text);
    return read_telemetry_csv(in);
  };

  SECTION("empty stream") {
    REQUIRE_THROWS_AS(read(""), FormatError);
  }
  SECTION("wrong header") {
    try {
      read("time,stuff\n");
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      REQUIRE(e.row() == 1);
    }
  }
  SECTION("header only") {
    REQUIRE_THROWS_AS(read(std::string(kTelemetryHeader) + "\n"), FormatError);
  }
  SECTION("column count") {
    try {
      read(row("0,0,PositiveNeutral,0,0,0"));
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      REQUIRE(e.row() == 2);
    }
  }
  SECTION("bad number") {
    REQUIRE_THROWS_AS(read(row("0,zero,PositiveNeutral,0,0,0,0,0,0,0")),
                      FormatError);
  }
  SECTION("trailing junk on a number") {
    REQUIRE_THROWS_AS(read(row("0,0.5x,PositiveNeutral,0,0,0,0,0,0,0")),
                      FormatError);
  }
  SECTION("unknown region") {
    REQUIRE_THROWS_AS(read(row("0,0,warp_drive,0,0,0,0,0,0,0")), FormatError);
  }
  SECTION("valve must be a flag") {
    REQUIRE_THROWS_AS(read(row("0,0,PositiveNeutral,0,0,0,0,2,0,0")),
                      FormatError);
  }
  SECTION("crlf and blank lines are tolerated") {
    auto rows = read(std::string(kTelemetryHeader) +
                     "\r\n0,0,PositiveNeutral,0,0,0,0,0,0,0\r\n\n");
    REQUIRE(rows.size() == 1);
  }
}

TEST_CASE("sample spacing recovery") {
  std::vector<TelemetryRow> rows(3);
  rows[0].t = 0.0;
  rows[1].t = 0.01;
  rows[2].t = 0.02;
  REQUIRE(telemetry_dt(rows) == Catch::Approx(0.01));
  rows[2].t = 0.03;
  REQUIRE_THROWS_AS(telemetry_dt(rows), FormatError);
  rows.resize(1);
  REQUIRE_THROWS_AS(telemetry_dt(rows), FormatError);
}

TEST_CASE("force traces come straight out of the table") {
  std::vector<TelemetryRow> rows(4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].t = 0.5 + static_cast<double>(i) * 0.01;
    rows[i].f_left = static_cast<double>(i) * 10.0;
    rows[i].f_right = 100.0 - static_cast<double>(i);
  }
  auto traces = extract_force_traces(rows);
  REQUIRE(traces.left.foot == Foot::kLeft);
  REQUIRE(traces.right.foot == Foot::kRight);
  REQUIRE(traces.left.start_t == 0.5);
  REQUIRE(traces.left.dt == Catch::Approx(0.01));
  REQUIRE(traces.left.force == std::vector<double>{0.0, 10.0, 20.0, 30.0});
  REQUIRE(traces.right.force[3] == 97.0);
}

TEST_CASE("scenario json overlays onto defaults") {
  auto j = json::parse(R"({
    "schema_version": "1.5.2",
    "condition": "B",
    "name": "demo",
    "seed": 42,
    "target_velocity": 0.6,
    "walker": {"mass": 14.0},
    "gait": {"cadence": 48.0},
    "timeline": [{"t": 2.0, "kind": "push", "force": -10.0, "duration": 0.5}]
  })");
  auto loaded = parse_scenario(j);
  REQUIRE(loaded.config.condition == Condition::kB);
  REQUIRE(loaded.config.name == "demo");
  REQUIRE(loaded.seed.has_value());
  REQUIRE(*loaded.seed == 42);
  REQUIRE(loaded.config.target_velocity == 0.6);
  REQUIRE(loaded.config.walker.mass == 14.0);
  REQUIRE(loaded.config.gait.cadence == 48.0);
  // Untouched fields keep their defaults.
  REQUIRE(loaded.config.walker.wheel_radius == 0.075);
  REQUIRE(loaded.config.gait.assist_stride_gain > 0.0);
  REQUIRE(loaded.config.timeline.size() == 1);
  REQUIRE(loaded.config.timeline[0].kind == "push");
}

TEST_CASE("condition preset zeroes assist response") {
  auto loaded = parse_scenario(json::parse(R"({"condition": "A"})"));
  REQUIRE(loaded.config.gait.assist_stance_reduction == 0.0);
  REQUIRE(loaded.config.gait.assist_stride_gain == 0.0);
  REQUIRE_FALSE(loaded.seed.has_value());
}

TEST_CASE("scenario json rejects unknown and mistyped keys") {
  REQUIRE_THROWS_AS(parse_scenario(json::parse(R"({"walker": {"bogus": 1}})")),
                    ConfigError);
  try {
    parse_scenario(json::parse(R"({"walker": {"bogus": 1}})"));
  } catch (const ConfigError& e) {
    REQUIRE(e.field() == "walker.bogus");
  }
  REQUIRE_THROWS_AS(parse_scenario(json::parse(R"({"dt": "fast"})")), ConfigError);
  REQUIRE_THROWS_AS(parse_scenario(json::parse(R"({"condition": "C"})")), ConfigError);
  REQUIRE_THROWS_AS(parse_scenario(json::parse(R"([1, 2])")), ConfigError);
  REQUIRE_THROWS_AS(parse_scenario(json::parse(R"({"schema_version": "2.0.0"})")),
                    ConfigError);
  REQUIRE_THROWS_AS(parse_scenario(json::parse(R"({"schema_version": "zoom"})")),
                    ConfigError);
  // Value errors surface through the same validation as programmatic configs.
  REQUIRE_THROWS_AS(parse_scenario(json::parse(R"({"dt": 0.0})")), ConfigError);
  REQUIRE_THROWS_AS(
      parse_scenario(json::parse(R"({"timeline": [{"kind": "warp"}]})")),
      ConfigError);
}

TEST_CASE("json text errors carry their source") {
  try {
    parse_json_text("{nope", "cfg.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.field() == "cfg.json");
  }
  REQUIRE_THROWS_AS(read_text_file("/nonexistent/cfg.json"), ConfigError);
}

TEST_CASE("batch json parses and validates") {
  auto j = json::parse(R"({
    "name": "pilot",
    "trials": 3,
    "base_seed": 9,
    "conditions": ["A", "B"],
    "alpha": 0.01,
    "variant": "welch",
    "exclude_steps": 1,
    "scenario": {"target_distance": 6.0}
  })");
  auto b = parse_batch(j);
  REQUIRE(b.name == "pilot");
  REQUIRE(b.trials == 3);
  REQUIRE(b.base_seed == 9);
  REQUIRE(b.conditions.size() == 2);
  REQUIRE(b.alpha == 0.01);
  REQUIRE(b.variant == TTestVariant::kWelch);
  REQUIRE(b.exclude_steps == 1);
  auto cfg_a = b.scenario_for(Condition::kA);
  REQUIRE(cfg_a.condition == Condition::kA);
  REQUIRE(cfg_a.target_distance == 6.0);
  auto cfg_b = b.scenario_for(Condition::kB);
  REQUIRE(cfg_b.gait.assist_stride_gain > 0.0);

  REQUIRE_THROWS_AS(parse_batch(json::parse(R"({"trials": 1})")), ConfigError);
  REQUIRE_THROWS_AS(parse_batch(json::parse(R"({"variant": "anova"})")), ConfigError);
  REQUIRE_THROWS_AS(parse_batch(json::parse(R"({"conditions": []})")), ConfigError);
  REQUIRE_THROWS_AS(parse_batch(json::parse(R"({"alpha": 1.5})")), ConfigError);
  // The batch owns the condition; overlays cannot set one.
  REQUIRE_THROWS_AS(
      parse_batch(json::parse(R"({"scenario": {"condition": "A"}})")), ConfigError);
  REQUIRE_THROWS_AS(parse_batch(json::parse(R"({"scenario": {"dt": -1.0}})")),
                    ConfigError);
}

TEST_CASE("run report json carries the run identity") {
  auto cfg = make_scenario(Condition::kA);
  cfg.max_duration = 5.0;
  auto rec = run_scenario(cfg, 5);
  auto j = run_meta_json(rec);
  REQUIRE(j.at("schema_version") == kSchemaVersion);
  REQUIRE(j.at("name") == "condition-A");
  REQUIRE(j.at("condition") == "A");
  REQUIRE(j.at("seed") == 5);
  REQUIRE(j.at("ticks") == rec.telemetry.size());
  REQUIRE(j.at("truth").at("cycles").is_array());

  auto dump = j.dump();
  REQUIRE(json::parse(dump) == j);
}

TEST_CASE("event log serializes one json object per line") {
  RunRecord rec;
  rec.events.push_back({0.5, "stop", "brake engaged"});
  rec.events.push_back({1.0, "time_limit", ""});
  auto text = events_jsonl(rec);
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    auto j = json::parse(line);
    REQUIRE(j.contains("t"));
    REQUIRE(j.contains("kind"));
    ++n;
  }
  REQUIRE(n == 2);
}

TEST_CASE("bar charts are deterministic and well formed") {
  std::vector<BarGroup> groups = {
      {"stance", {{"A", 57.8, 0.4}, {"B", 56.9, 0.5}}},
      {"swing", {{"A", 42.2, 0.4}, {"B", 43.1, 0.5}}},
  };
  auto svg1 = svg_bar_chart("Stance & swing <percent>", "percent", groups);
  auto svg2 = svg_bar_chart("Stance & swing <percent>", "percent", groups);
  REQUIRE(svg1 == svg2);
  REQUIRE(svg1.find("<svg") != std::string::npos);
  REQUIRE(svg1.find("</svg>") != std::string::npos);
  // Reserved characters in labels are escaped.
  REQUIRE(svg1.find("Stance &amp; swing &lt;percent&gt;") != std::string::npos);
  REQUIRE(svg1.find("& swing <percent>") == std::string::npos);

  REQUIRE_THROWS_AS(svg_bar_chart("t", "y", {}), ConfigError);
  std::vector<BarGroup> ragged = {{"a", {{"A", 1.0, 0.0}}},
                                  {"b", {{"A", 1.0, 0.0}, {"B", 2.0, 0.0}}}};
  REQUIRE_THROWS_AS(svg_bar_chart("t", "y", ragged), ConfigError);
}

TEST_CASE("schema version helpers") {
  REQUIRE(schema_major("1.0.0") == 1);
  REQUIRE(schema_major("1.5.2") == 1);
  REQUIRE(schema_major("2.0.0") == 2);
  REQUIRE_THROWS_AS(schema_major("nope"), ConfigError);
  REQUIRE_THROWS_AS(schema_major(""), ConfigError);
}
