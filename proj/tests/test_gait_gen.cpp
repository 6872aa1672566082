#include <cmath>

#include "catch2/catch_amalgamated.hpp"
#include "walkersim/gait_gen.hpp"

using namespace walkersim;

namespace {

GaitParams quiet(Condition c) {
  GaitParams p = condition_preset(c);
  p.force_noise_std = 0.0;
  p.stance_jitter_std = 0.0;
  p.period_jitter_std = 0.0;
  return p;
}

}  // namespace

TEST_CASE("unassisted quiet trial walks the course in 14 steps") {
  RngStream rng(1, "gait");
  auto trial = synthesize_trial(quiet(Condition::kA), 8.0, 0.01, {}, rng);
  REQUIRE(trial.truth.step_count == 14);
  REQUIRE(trial.truth.cycles.size() == 7);
  REQUIRE(trial.truth.distance == Catch::Approx(8.4).margin(1e-12));
  for (const auto& c : trial.truth.cycles) {
    REQUIRE(c.stance_left == Catch::Approx(0.58).margin(1e-12));
    REQUIRE(c.stance_right == Catch::Approx(0.60).margin(1e-12));
    REQUIRE(c.stride_length == Catch::Approx(1.2).margin(1e-12));
    REQUIRE(c.period == Catch::Approx(2.4).margin(1e-12));
    REQUIRE(c.assist_mean == 0.0);
    REQUIRE_FALSE(c.fog);
  }
}

TEST_CASE("a shorter stride needs proportionally more steps") {
  RngStream rng(1, "gait");
  GaitParams p = quiet(Condition::kA);
  p.stride_length = 1.0;
  auto trial = synthesize_trial(p, 8.0, 0.01, {}, rng);
  REQUIRE(trial.truth.step_count == 16);
  REQUIRE(trial.truth.distance == Catch::Approx(8.0).margin(1e-12));
}

TEST_CASE("saturated assist shortens right stance and lengthens stride") {
  RngStream rng(1, "gait");
  auto trial = synthesize_trial(quiet(Condition::kB), 8.0, 0.01, {1.0}, rng);
  REQUIRE(trial.truth.step_count == 13);
  for (const auto& c : trial.truth.cycles) {
    REQUIRE(c.assist_mean == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(c.stance_right == Catch::Approx(0.58).margin(1e-12));
    REQUIRE(c.stride_length == Catch::Approx(1.26).margin(1e-12));
  }
}

TEST_CASE("half assist lands between the two presets") {
  RngStream rng(1, "gait");
  auto trial = synthesize_trial(quiet(Condition::kB), 8.0, 0.01, {0.5}, rng);
  for (const auto& c : trial.truth.cycles) {
    REQUIRE(c.stance_right == Catch::Approx(0.59).margin(1e-12));
    REQUIRE(c.stride_length == Catch::Approx(1.23).margin(1e-12));
  }
}

TEST_CASE("assist terms are inert in the unassisted preset") {
  RngStream rng(1, "gait");
  auto trial = synthesize_trial(quiet(Condition::kA), 8.0, 0.01, {1.0}, rng);
  for (const auto& c : trial.truth.cycles) {
    REQUIRE(c.stance_right == Catch::Approx(0.60).margin(1e-12));
    REQUIRE(c.stride_length == Catch::Approx(1.2).margin(1e-12));
  }
}

TEST_CASE("cycle parameters react to the assist seen in the previous left stance") {
  RngStream rng(1, "gait");
  // Assist is 1 only while the first left stance is on the ground
  // (t < 0.58 * 2.4 = 1.392 s).
  std::vector<double> stream;
  for (int i = 0; i < 600; ++i) stream.push_back(i * 0.01 < 1.392 ? 1.0 : 0.0);
  auto trial = synthesize_trial(quiet(Condition::kB), 8.0, 0.01, stream, rng);
  REQUIRE(trial.truth.cycles.size() >= 3);
  REQUIRE(trial.truth.cycles[0].assist_mean == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(trial.truth.cycles[1].assist_mean == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(trial.truth.cycles[2].assist_mean == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(trial.truth.cycles[2].stance_right == Catch::Approx(0.60).margin(1e-12));
}

TEST_CASE("loading is trapezoidal on each stance") {
  RngStream rng(1, "gait");
  auto trial = synthesize_trial(quiet(Condition::kA), 8.0, 0.01, {}, rng);
  const auto& f = trial.left.force;
  REQUIRE(f[0] == 0.0);                       // ramp starts at heel strike
  REQUIRE(f[2] == Catch::Approx(280.0));      // mid-rise, 700 * 0.02 / 0.05
  REQUIRE(f[50] == Catch::Approx(700.0));     // plateau
  REQUIRE(f[139] == Catch::Approx(28.0));     // tail of the fall, ends at 1.392
  REQUIRE(f[140] == 0.0);
  // Right heel strike is offset by (0.58 - 0.16 / 2) of the cycle: 1.2 s.
  REQUIRE(trial.right.force[119] == 0.0);
  REQUIRE(trial.right.force[121] == Catch::Approx(140.0));
}

TEST_CASE("noisy traces are non-negative and seed reproducible") {
  GaitParams p = condition_preset(Condition::kA);
  RngStream r1(9, "gait"), r2(9, "gait"), r3(10, "gait");
  auto a = synthesize_trial(p, 8.0, 0.01, {}, r1);
  auto b = synthesize_trial(p, 8.0, 0.01, {}, r2);
  auto c = synthesize_trial(p, 8.0, 0.01, {}, r3);
  REQUIRE(a.left.force == b.left.force);
  REQUIRE(a.right.force == b.right.force);
  REQUIRE(a.left.force != c.left.force);
  for (double v : a.left.force) REQUIRE(v >= 0.0);
}

TEST_CASE("freeze episodes dilate the affected cycle and stall progress") {
  GaitParams p = quiet(Condition::kA);
  p.fog_rate = 20.0;  // expect roughly one episode per 3 s
  p.fog_duration = 1.0;
  RngStream rng(4, "gait");
  auto trial = synthesize_trial(p, 8.0, 0.01, {}, rng);
  int fog_cycles = 0;
  for (const auto& c : trial.truth.cycles) {
    if (c.fog) {
      ++fog_cycles;
      REQUIRE(c.period >= 2.4 + 0.999);
    } else {
      REQUIRE(c.period == Catch::Approx(2.4).margin(1e-12));
    }
  }
  REQUIRE(fog_cycles >= 1);
  // Frozen cycles still swing the legs, so more steps are needed.
  REQUIRE(trial.truth.step_count > 14);
  REQUIRE(trial.truth.distance >= 8.0);
}

TEST_CASE("halt stops scheduling new cycles") {
  GaitParams p = quiet(Condition::kA);
  RngStream rng(1, "gait");
  GaitSynthesizer g(p, 8.0, &rng);
  g.start(0.0);
  double t = 0.0;
  for (; t < 1.0; t += 0.01) g.sample(t, 0.0);
  g.halt();
  for (; !g.done(t) && t < 60.0; t += 0.01) g.sample(t, 0.0);
  REQUIRE(g.done(t));
  REQUIRE(t < 10.0);
  for (const auto& c : g.truth().cycles) REQUIRE(c.start_t <= 1.0);
}

TEST_CASE("synthesizer cannot start twice") {
  GaitParams p = quiet(Condition::kA);
  RngStream rng(1, "gait");
  GaitSynthesizer g(p, 8.0, &rng);
  g.start(0.0);
  REQUIRE_THROWS_AS(g.start(1.0), StateError);
}

TEST_CASE("gait parameter validation") {
  GaitParams p;
  p.stance_fraction_left = 0.5;
  REQUIRE_THROWS_AS(validate(p), ConfigError);
  p = GaitParams{};
  p.double_support_fraction = 1.2;
  REQUIRE_THROWS_AS(validate(p), ConfigError);
  p = GaitParams{};
  p.cadence = 0.0;
  REQUIRE_THROWS_AS(validate(p), ConfigError);
  p = GaitParams{};
  p.rise_time = 2.0;
  REQUIRE_THROWS_AS(validate(p), ConfigError);
  RngStream rng(1, "gait");
  REQUIRE_THROWS_AS(GaitSynthesizer(GaitParams{}, 0.0, &rng), ConfigError);
}
