#include "urnlab/random.hpp"

#include <algorithm>
#include <boost/random/binomial_distribution.hpp>
#include <cmath>

namespace urnlab {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomSource RandomSource::for_replication(std::uint64_t seed, std::uint64_t index) {
  return RandomSource(splitmix64(seed ^ splitmix64(index + 0x9e3779b97f4a7c15ULL)));
}

std::int64_t RandomSource::uniform_int(std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(*this);
}

std::int64_t RandomSource::binomial(std::int64_t trials, double p) {
  if (trials <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  return boost::random::binomial_distribution<std::int64_t, double>(trials, p)(*this);
}

namespace {

// Small samples: sequential draws (HYP).
std::int64_t hypergeometric_small(RandomSource& rng, std::int64_t good, std::int64_t bad,
                                  std::int64_t sample) {
  const double d1 = static_cast<double>(bad + good - sample);
  const double d2 = static_cast<double>(std::min(bad, good));
  double y = d2;
  std::int64_t k = sample;
  while (y > 0.0) {
    const double u = rng.uniform01();
    y -= std::floor(u + y / (d1 + static_cast<double>(k)));
    --k;
    if (k == 0) break;
  }
  const auto z = static_cast<std::int64_t>(d2 - y);
  return good > bad ? sample - z : z;
}

double log_factorial(double n) { return std::lgamma(n + 1.0); }

// Ratio-of-uniforms with the HRUA* constants; expected O(1) work per draw.
std::int64_t hypergeometric_hrua(RandomSource& rng, std::int64_t good, std::int64_t bad,
                                 std::int64_t sample) {
  constexpr double kD1 = 1.7155277699214135;
  constexpr double kD2 = 0.8989161620588988;
  const std::int64_t mingb = std::min(good, bad);
  const std::int64_t maxgb = std::max(good, bad);
  const std::int64_t popsize = good + bad;
  const std::int64_t m = std::min(sample, popsize - sample);
  const double d4 = static_cast<double>(mingb) / static_cast<double>(popsize);
  const double d5 = 1.0 - d4;
  const double d6 = static_cast<double>(m) * d4 + 0.5;
  const double d7 = std::sqrt(static_cast<double>(popsize - m) * static_cast<double>(sample) *
                                  d4 * d5 / static_cast<double>(popsize - 1) +
                              0.5);
  const double d8 = kD1 * d7 + kD2;
  const auto d9 = static_cast<std::int64_t>(
      std::floor(static_cast<double>(m + 1) * static_cast<double>(mingb + 1) /
                 static_cast<double>(popsize + 2)));
  auto log_weight = [&](std::int64_t z) {
    return log_factorial(static_cast<double>(z)) + log_factorial(static_cast<double>(mingb - z)) +
           log_factorial(static_cast<double>(m - z)) +
           log_factorial(static_cast<double>(maxgb - m + z));
  };
  const double d10 = log_weight(d9);
  const double d11 =
      std::min(static_cast<double>(std::min(m, mingb)) + 1.0, std::floor(d6 + 16.0 * d7));

  std::int64_t z = 0;
  while (true) {
    const double x = rng.uniform01();
    const double y = rng.uniform01();
    const double w = d6 + d8 * (y - 0.5) / x;
    if (w < 0.0 || w >= d11) continue;
    z = static_cast<std::int64_t>(std::floor(w));
    const double t = d10 - log_weight(z);
    if (x * (4.0 - x) - 3.0 <= t) break;
    if (x * (x - t) >= 1.0) continue;
    if (2.0 * std::log(x) <= t) break;
  }
  if (good > bad) z = m - z;
  if (m < sample) z = good - z;
  return z;
}

}  // namespace

std::int64_t RandomSource::hypergeometric(std::int64_t good, std::int64_t bad,
                                          std::int64_t sample) {
  if (sample <= 0 || good <= 0) return 0;
  if (bad <= 0) return sample;
  if (sample >= good + bad) return good;
  if (sample > 10) return hypergeometric_hrua(*this, good, bad, sample);
  return hypergeometric_small(*this, good, bad, sample);
}

std::int64_t RandomSource::poisson(double mean) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<std::int64_t>(mean)(*this);
}

std::int64_t RandomSource::geometric(double p) {
  if (p >= 1.0) return 1;
  return 1 + std::geometric_distribution<std::int64_t>(p)(*this);
}

double RandomSource::normal() { return std::normal_distribution<double>()(*this); }

}  // namespace urnlab
