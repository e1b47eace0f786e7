#pragma once

#include <cstdint>
#include <random>

namespace urnlab {

/// Seeded deterministic generator. One instance per trajectory; never shared
/// between threads. Satisfies UniformRandomBitGenerator so it can drive the
/// standard distributions directly.
class RandomSource {
 public:
  using result_type = std::uint64_t;

  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  /// Stream for replication `index` of a run seeded with `seed`:
  /// engine seed = splitmix64(seed ^ splitmix64(index + golden)).
  static RandomSource for_replication(std::uint64_t seed, std::uint64_t index);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return uniform01() < p; }
  std::int64_t binomial(std::int64_t trials, double p);
  /// Number of `good` items in a sample of `sample` drawn without replacement
  /// from `good + bad` items.
  std::int64_t hypergeometric(std::int64_t good, std::int64_t bad, std::int64_t sample);
  std::int64_t poisson(double mean);
  /// Trials up to and including the first success, support {1, 2, ...}.
  std::int64_t geometric(double p);
  double normal();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace urnlab
