#include <cstdint>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "walkersim/cli_ops.hpp"
#include "walkersim/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Rolling-walker simulator and gait analysis toolkit"};
  app.set_version_flag("--version", std::string(walkersim::kLibraryVersion));
  app.require_subcommand(1);

  std::string run_config, run_out = "out";
  std::uint64_t run_seed = 0;
  int run_exclude = 2;
  auto* run = app.add_subcommand("run", "simulate one trial from a scenario config");
  run->add_option("--config", run_config, "scenario config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "output directory");
  auto* run_seed_opt = run->add_option("--seed", run_seed, "override the run seed");
  run->add_option("--exclude-steps", run_exclude,
                  "leading steps to exclude from analysis");

  std::string batch_config, batch_out = "out", batch_variant;
  std::uint64_t batch_seed = 0;
  int batch_exclude = 0;
  auto* batch =
      app.add_subcommand("batch", "run repeated trials and compare conditions");
  batch->add_option("--config", batch_config, "batch config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  batch->add_option("--out", batch_out, "output directory");
  auto* batch_seed_opt =
      batch->add_option("--seed", batch_seed, "override the base seed");
  auto* batch_variant_opt = batch->add_option(
      "--variant", batch_variant, "t test variant (student or welch)");
  auto* batch_exclude_opt = batch->add_option(
      "--exclude-steps", batch_exclude, "leading steps to exclude from analysis");

  std::string an_csv, an_out = "features.json";
  int an_exclude = 2;
  auto* analyze =
      app.add_subcommand("analyze", "extract gait features from a telemetry CSV");
  analyze->add_option("--input", an_csv, "telemetry CSV")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--out", an_out, "features JSON path");
  analyze->add_option("--exclude-steps", an_exclude,
                      "leading steps to exclude from analysis");

  std::string plot_report, plot_out = "plots";
  auto* plot = app.add_subcommand("plot", "render charts from a batch report");
  plot->add_option("--report", plot_report, "batch report JSON")
      ->required()
      ->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? walkersim::kExitOk : walkersim::kExitConfig;
  }

  if (run->parsed()) {
    std::optional<std::uint64_t> seed;
    if (run_seed_opt->count() > 0) seed = run_seed;
    return walkersim::guard_cli(
        [&] { return walkersim::cmd_run(run_config, run_out, seed, run_exclude); });
  }
  if (batch->parsed()) {
    std::optional<std::uint64_t> seed;
    if (batch_seed_opt->count() > 0) seed = batch_seed;
    std::optional<std::string> variant;
    if (batch_variant_opt->count() > 0) variant = batch_variant;
    std::optional<int> exclude;
    if (batch_exclude_opt->count() > 0) exclude = batch_exclude;
    return walkersim::guard_cli([&] {
      return walkersim::cmd_batch(batch_config, batch_out, seed, variant, exclude);
    });
  }
  if (analyze->parsed()) {
    return walkersim::guard_cli(
        [&] { return walkersim::cmd_analyze(an_csv, an_out, an_exclude); });
  }
  return walkersim::guard_cli(
      [&] { return walkersim::cmd_plot(plot_report, plot_out); });
}
