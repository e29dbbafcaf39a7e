#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace spherecs {

/// Counter-based SplitMix64 generator.
///
/// Output i of stream (seed) is splitmix64_mix(seed + (i + 1) * 0x9E3779B97F4A7C15), so
/// sequences are identical on every platform and compiler. Floating-point variates are built
/// here rather than through <random> distributions, whose algorithms are unspecified.
class Rng {
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept : seed_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next_u64(); }
  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on [a, b).
  double uniform(double a, double b) noexcept { return a + (b - a) * uniform(); }
  /// Unbiased integer in [0, n); n > 0.
  std::uint64_t index(std::uint64_t n) noexcept;
  /// Standard normal via Box-Muller (one variate per call, the pair partner is cached).
  double normal() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  /// Derives an independent stream seed from a base seed and a list of keys
  /// (e.g. {m, s, trial}) so parallel work items never share a stream.
  static std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept;

  static std::uint64_t mix(std::uint64_t z) noexcept;

private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace spherecs
