#pragma once

#include <array>
#include <cstdint>

#include "urnlab/error.hpp"
#include "urnlab/random.hpp"

namespace urnlab {

class ReinforcementSpec;
class SampleSizeLaw;

struct ModelParams {
  double p = 0.5;   // memory parameter
  double q = 0.5;   // initial-choice bias
  double q1 = 0.5;  // satisfaction probability for product A
  double q2 = 0.5;  // satisfaction probability for product B
  std::int64_t N = 1;

  /// Simulation accepts the degenerate satisfaction probabilities 0 and 1;
  /// the analytical side needs them strictly inside (0, 1).
  void validate(bool allow_degenerate = false) const;
};

/// Colour counts: a satisfied-A, b satisfied-B, c unsatisfied-A, d unsatisfied-B.
struct UrnState {
  std::int64_t n = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
  std::int64_t d = 0;

  bool balanced() const { return a >= 0 && b >= 0 && c >= 0 && d >= 0 && a + b + c + d == n; }
  friend bool operator==(const UrnState&, const UrnState&) = default;
};

/// Point (x, y) of the simplex x, y >= 0, x + y <= 1.
struct SimplexPoint {
  double x = 0.0;
  double y = 0.0;
};

inline bool in_simplex(SimplexPoint pt, double tol = 1e-12) {
  return pt.x >= -tol && pt.y >= -tol && pt.x + pt.y <= 1.0 + tol;
}

enum class SamplingScheme { WithReplacement, WithoutReplacement };
enum class SamplerMode { Fast, NaiveIndices };

const char* to_string(SamplingScheme scheme) noexcept;

struct SampleCounts {
  std::int64_t k = 0;
  std::int64_t v1 = 0;
  std::int64_t v2 = 0;
  std::int64_t v3 = 0;
  std::int64_t v4 = 0;
};

/// g = p F + (1 - p)(1 - F), written so that p = 1/2 gives exactly 1/2.
inline double selection_probability(double p, double f) { return (1.0 - p) + (2.0 * p - 1.0) * f; }

/// Probabilities of the four colours for the next customer given the
/// selection probability g.
std::array<double, 4> colour_probabilities(const ModelParams& params, double g);

UrnState init_history(const ModelParams& params, RandomSource& rng);

SampleCounts draw_sample_counts(const UrnState& state, SamplingScheme scheme, std::int64_t k,
                                RandomSource& rng, SamplerMode mode = SamplerMode::Fast);

UrnState step(const UrnState& state, const ModelParams& params, SamplingScheme scheme,
              const ReinforcementSpec& reinforcement, const SampleSizeLaw& law,
              RandomSource& rng, SamplerMode mode = SamplerMode::Fast);

inline std::int64_t walker_position(const UrnState& s) { return (s.a + s.c) - (s.b + s.d); }

}  // namespace urnlab
