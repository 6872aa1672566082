#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "walkersim/errors.hpp"

namespace walkersim {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// One named substream of the scenario seed. All distribution transforms are
// written out explicitly so the draw sequence does not depend on the standard
// library implementation.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view label)
      : engine_(splitmix64(seed ^ hash_label(label))) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Marsaglia polar method; second deviate cached.
  double normal(double mean = 0.0, double stddev = 1.0) {
    if (have_spare_) {
      have_spare_ = false;
      return mean + stddev * spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return mean + stddev * u * f;
  }

  double exponential(double rate) {
    if (!(rate > 0.0)) throw NumericError("exponential rate must be positive");
    return -std::log1p(-uniform01()) / rate;
  }

  // Knuth's method; fine for the small means used here.
  int poisson(double mean) {
    if (!(mean >= 0.0)) throw NumericError("poisson mean must be non-negative");
    if (mean == 0.0) return 0;
    double limit = std::exp(-mean);
    double p = 1.0;
    int k = 0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit && k < 1000000);
    return k - 1;
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace walkersim
