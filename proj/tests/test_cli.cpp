#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "catch2/catch_amalgamated.hpp"
#include "walkersim/cli_ops.hpp"

using namespace walkersim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;

  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("walkersim-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str(const std::string& name = "") const {
    return name.empty() ? path.string() : (path / name).string();
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  REQUIRE(out.good());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("run command produces the full artifact set") {
  TempDir tmp;
  write_file(tmp.str("scenario.json"), R"({"condition": "A", "seed": 42})");
  const std::string out_dir = tmp.str("out");

  int rc = cmd_run(tmp.str("scenario.json"), out_dir, std::nullopt, 2);
  REQUIRE(rc == kExitOk);
  for (const char* f : {"telemetry.csv", "run.json", "events.jsonl", "features.json"})
    REQUIRE(fs::exists(fs::path(out_dir) / f));

  auto meta = json::parse(slurp(out_dir + "/run.json"));
  REQUIRE(meta.at("seed") == 42);
  REQUIRE(meta.at("condition") == "A");
  REQUIRE(meta.at("completed") == true);
  REQUIRE(meta.contains("features"));
  REQUIRE(meta.at("features").at("step_count") == 14);

  auto feats = json::parse(slurp(out_dir + "/features.json"));
  REQUIRE(feats.at("left").at("n_strides").get<int>() > 0);

  // The telemetry file parses back through the reader.
  auto rows = read_telemetry_csv_file(out_dir + "/telemetry.csv");
  REQUIRE(rows.size() == meta.at("ticks").get<std::size_t>());

  SECTION("the seed flag wins over the config seed") {
    const std::string out2 = tmp.str("out2");
    REQUIRE(cmd_run(tmp.str("scenario.json"), out2, 7, 2) == kExitOk);
    auto meta2 = json::parse(slurp(out2 + "/run.json"));
    REQUIRE(meta2.at("seed") == 7);
  }

  SECTION("analyze reproduces the run's own features") {
    const std::string fpath = tmp.str("features2.json");
    REQUIRE(cmd_analyze(out_dir + "/telemetry.csv", fpath, 2) == kExitOk);
    auto again = json::parse(slurp(fpath));
    REQUIRE(again.at("step_count") == meta.at("features").at("step_count"));
    REQUIRE(again.at("left").at("stance_percent_mean").get<double>() ==
            Catch::Approx(meta.at("features")
                              .at("left")
                              .at("stance_percent_mean")
                              .get<double>())
                .margin(1e-9));
  }
}

TEST_CASE("an interrupted run exits incomplete") {
  TempDir tmp;
  write_file(tmp.str("scenario.json"), R"({
    "condition": "A",
    "max_duration": 10.0,
    "timeline": [{"t": 3.0, "kind": "stop", "force": 0.0, "duration": 0.0}]
  })");
  int rc = cmd_run(tmp.str("scenario.json"), tmp.str("out"), std::nullopt, 2);
  REQUIRE(rc == kExitIncomplete);
  auto meta = json::parse(slurp(tmp.str("out") + "/run.json"));
  REQUIRE(meta.at("completed") == false);
  REQUIRE(meta.at("termination") == "time_limit");
}

TEST_CASE("batch command writes report and charts") {
  TempDir tmp;
  write_file(tmp.str("batch.json"), R"({
    "name": "pilot",
    "trials": 2,
    "base_seed": 1,
    "conditions": ["A", "B"]
  })");
  const std::string out_dir = tmp.str("out");
  int rc = cmd_batch(tmp.str("batch.json"), out_dir, std::nullopt, std::nullopt,
                     std::nullopt);
  REQUIRE(rc == kExitOk);
  for (const char* f : {"report.json", "report.txt", "stance_percent.svg",
                        "stride_time.svg", "cadence.svg", "step_count.svg"})
    REQUIRE(fs::exists(fs::path(out_dir) / f));

  auto report = json::parse(slurp(out_dir + "/report.json"));
  REQUIRE(report.at("per_trial").size() == 4);
  // Every metric lands in exactly one of the two tables. Step counts are
  // deterministic per condition here, so their t statistic is undefined.
  for (const char* k : {"stance_percent", "stride_time", "cadence"})
    REQUIRE(report.at("comparisons").contains(k));
  REQUIRE(report.contains("untestable"));
  REQUIRE(report.at("untestable").contains("step_count"));
  REQUIRE(report.at("comparisons").size() + report.at("untestable").size() == 4);
  // Conditions share seeds, so the pairing is explicit in the table.
  REQUIRE(report.at("per_trial")[0].at("seed") == 1);
  REQUIRE(report.at("per_trial")[2].at("seed") == 1);

  SECTION("a repeated batch is byte identical") {
    const std::string out2 = tmp.str("out-repeat");
    REQUIRE(cmd_batch(tmp.str("batch.json"), out2, std::nullopt, std::nullopt,
                      std::nullopt) == kExitOk);
    REQUIRE(slurp(out2 + "/report.json") == slurp(out_dir + "/report.json"));
    REQUIRE(slurp(out2 + "/stance_percent.svg") ==
            slurp(out_dir + "/stance_percent.svg"));
  }

  SECTION("plot rebuilds the charts from the report alone") {
    const std::string plots = tmp.str("plots");
    REQUIRE(cmd_plot(out_dir + "/report.json", plots) == kExitOk);
    for (const char* f : {"stance_percent.svg", "stride_time.svg", "cadence.svg",
                          "step_count.svg"})
      REQUIRE(slurp(plots + "/" + f) == slurp(out_dir + "/" + f));
  }
}

TEST_CASE("cli errors map to exit codes") {
  TempDir tmp;
  SECTION("missing config file") {
    int rc = guard_cli([&] { return cmd_run(tmp.str("nope.json"), tmp.str("o"),
                                            std::nullopt, 2); });
    REQUIRE(rc == kExitConfig);
  }
  SECTION("invalid json") {
    write_file(tmp.str("bad.json"), "{");
    int rc = guard_cli([&] { return cmd_run(tmp.str("bad.json"), tmp.str("o"),
                                            std::nullopt, 2); });
    REQUIRE(rc == kExitConfig);
  }
  SECTION("unknown config key") {
    write_file(tmp.str("bad.json"), R"({"warp": 9})");
    int rc = guard_cli([&] { return cmd_run(tmp.str("bad.json"), tmp.str("o"),
                                            std::nullopt, 2); });
    REQUIRE(rc == kExitConfig);
  }
  SECTION("malformed telemetry") {
    write_file(tmp.str("t.csv"), "tick,nope\n");
    int rc = guard_cli(
        [&] { return cmd_analyze(tmp.str("t.csv"), tmp.str("f.json"), 2); });
    REQUIRE(rc == kExitConfig);
  }
  SECTION("negative exclude flag on batch") {
    write_file(tmp.str("batch.json"), R"({"trials": 2})");
    int rc = guard_cli([&] {
      return cmd_batch(tmp.str("batch.json"), tmp.str("o"), std::nullopt,
                       std::nullopt, -1);
    });
    REQUIRE(rc == kExitConfig);
  }
  SECTION("runtime errors are distinct from config errors") {
    int rc = guard_cli([]() -> int { throw InsufficientDataError("nothing"); });
    REQUIRE(rc == kExitError);
    rc = guard_cli([]() -> int { throw std::bad_alloc(); });
    REQUIRE(rc == kExitError);
    rc = guard_cli([] { return 5; });
    REQUIRE(rc == 5);
  }
}

TEST_CASE("plot rejects reports without trials") {
  TempDir tmp;
  write_file(tmp.str("r.json"), R"({"per_trial": []})");
  REQUIRE(guard_cli([&] {
            return cmd_plot(tmp.str("r.json"), tmp.str("p"));
          }) == kExitConfig);
  write_file(tmp.str("r2.json"), R"({"schema_version": "3.0.0", "per_trial": [{}]})");
  REQUIRE(guard_cli([&] {
            return cmd_plot(tmp.str("r2.json"), tmp.str("p"));
          }) == kExitConfig);
}
