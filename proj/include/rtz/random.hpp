#pragma once

// Reproducible Gaussian draws.
//
// Stream: SplitMix64 (Steele, Lea & Flood 2014) used as a counter-based
// generator. Output k of stream `seed` is fmix64(seed + (k+1) * 0x9E3779B97F4A7C15),
// with fmix64 the SplitMix64 finalizer. Uniforms take the top 53 bits and sit
// strictly inside (0, 1). Normals come from the Box-Muller transform applied
// to consecutive uniform pairs.
//
// Stream version 1. Golden reports depend on every detail above; changing any
// of it requires bumping kRandomStreamVersion.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace rtz {

inline constexpr int kRandomStreamVersion = 1;
inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t fmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed for Monte Carlo trial `index` under `base_seed`. Independent of how
/// trials are scheduled across workers.
constexpr std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t index) {
  return fmix64(base_seed + (index + 1) * kGoldenGamma);
}

class counter_stream {
 public:
  explicit constexpr counter_stream(std::uint64_t seed) : seed_(seed) {}

  constexpr std::uint64_t bits(std::uint64_t k) const { return fmix64(seed_ + (k + 1) * kGoldenGamma); }

  // (0, 1), never 0 so log() in Box-Muller is finite.
  constexpr double uniform(std::uint64_t k) const {
    return (static_cast<double>(bits(k) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Fill `out` with standard normals; draw i uses uniforms 2*(i/2) and 2*(i/2)+1.
  void normals(std::span<double> out) const {
    for (std::size_t i = 0; i < out.size(); i += 2) {
      const double u1 = uniform(i);
      const double u2 = uniform(i + 1);
      const double radius = std::sqrt(-2.0 * std::log(u1));
      const double angle = 2.0 * std::numbers::pi * u2;
      out[i] = radius * std::cos(angle);
      if (i + 1 < out.size()) out[i + 1] = radius * std::sin(angle);
    }
  }

 private:
  std::uint64_t seed_;
};

}  // namespace rtz
