#pragma once

// Seeded random streams. Every stochastic unit of work (a tree, a boosting
// stage, a Monte Carlo trial, a trace) draws from its own stream whose seed is
// derived from (master seed, index...), so results do not depend on the order
// or the number of workers that execute the units.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. Distributions are implemented here rather than taken from
// <random>, whose algorithms vary between standard library vendors.

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace pdm::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master) noexcept { return splitmix64(master); }

template <class... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, Rest... rest) noexcept {
  return derive_seed(splitmix64(master) ^ splitmix64(index ^ 0xD1B54A32D192ED03ULL),
                     static_cast<std::uint64_t>(rest)...);
}

// FNV-1a, used to key streams by item name.
constexpr std::uint64_t hash_name(std::string_view name) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, n). n must be positive.
  std::uint64_t index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = 0;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  // Standard normal, Marsaglia polar method (second variate discarded).
  double normal() {
    double u = 0.0, v = 0.0, s = 0.0;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pdm::rng
