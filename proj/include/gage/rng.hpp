#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>

namespace gage {

/// Seeded generator with platform-independent transforms. The engine output is
/// fixed by the standard; the distributions below are ours, so a seed
/// reproduces the same stream under any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for (seed, index), via splitmix64.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) noexcept;

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on {0, ..., n-1}; n must be positive.
  std::size_t index(std::size_t n);
  /// Standard normal (Box-Muller).
  double normal();

  template <typename It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::size_t>(last - first);
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = index(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gage
