#include "urnlab/model.hpp"

#include <string>
#include <unordered_set>

#include "urnlab/error.hpp"
#include "urnlab/reinforcement.hpp"
#include "urnlab/sample_laws.hpp"

namespace urnlab {

void ModelParams::validate(bool allow_degenerate) const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(p)) raise(ErrorCode::InvalidArgument, "p must lie in [0, 1]");
  if (!in_unit(q)) raise(ErrorCode::InvalidArgument, "q must lie in [0, 1]");
  if (allow_degenerate) {
    if (!in_unit(q1)) raise(ErrorCode::InvalidArgument, "q1 must lie in [0, 1]");
    if (!in_unit(q2)) raise(ErrorCode::InvalidArgument, "q2 must lie in [0, 1]");
  } else {
    if (!(q1 > 0.0 && q1 < 1.0)) raise(ErrorCode::InvalidArgument, "q1 must lie in (0, 1)");
    if (!(q2 > 0.0 && q2 < 1.0)) raise(ErrorCode::InvalidArgument, "q2 must lie in (0, 1)");
  }
  if (N < 1) raise(ErrorCode::InvalidArgument, "N must be at least 1");
}

const char* to_string(SamplingScheme scheme) noexcept {
  return scheme == SamplingScheme::WithReplacement ? "with-replacement" : "without-replacement";
}

std::array<double, 4> colour_probabilities(const ModelParams& params, double g) {
  return {params.q1 * g, params.q2 * (1.0 - g), (1.0 - params.q1) * g,
          (1.0 - params.q2) * (1.0 - g)};
}

UrnState init_history(const ModelParams& params, RandomSource& rng) {
  UrnState s;
  for (std::int64_t i = 0; i < params.N; ++i) {
    if (rng.bernoulli(params.q)) {
      if (rng.bernoulli(params.q1)) ++s.a; else ++s.c;
    } else {
      if (rng.bernoulli(params.q2)) ++s.b; else ++s.d;
    }
  }
  s.n = params.N;
  return s;
}

namespace {

constexpr std::int64_t kDirectTallyLimit = 16;

int colour_of_index(const UrnState& s, std::int64_t index) {
  if (index < s.a) return 0;
  index -= s.a;
  if (index < s.b) return 1;
  index -= s.b;
  return index < s.c ? 2 : 3;
}

void tally(SampleCounts& out, int colour) {
  switch (colour) {
    case 0: ++out.v1; break;
    case 1: ++out.v2; break;
    case 2: ++out.v3; break;
    default: ++out.v4; break;
  }
}

SampleCounts naive_indices(const UrnState& s, SamplingScheme scheme, std::int64_t k,
                           RandomSource& rng) {
  SampleCounts out{k, 0, 0, 0, 0};
  if (scheme == SamplingScheme::WithReplacement) {
    for (std::int64_t i = 0; i < k; ++i) tally(out, colour_of_index(s, rng.uniform_int(0, s.n - 1)));
    return out;
  }
  // Floyd's algorithm: k distinct indices out of n, each subset equally likely.
  std::unordered_set<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(k) * 2);
  for (std::int64_t j = s.n - k; j < s.n; ++j) {
    const std::int64_t t = rng.uniform_int(0, j);
    const std::int64_t pick = chosen.insert(t).second ? t : j;
    if (pick == j) chosen.insert(j);
    tally(out, colour_of_index(s, pick));
  }
  return out;
}

SampleCounts fast_counts(const UrnState& s, SamplingScheme scheme, std::int64_t k,
                         RandomSource& rng) {
  SampleCounts out{k, 0, 0, 0, 0};
  if (k <= kDirectTallyLimit) {
    if (scheme == SamplingScheme::WithReplacement) {
      for (std::int64_t i = 0; i < k; ++i)
        tally(out, colour_of_index(s, rng.uniform_int(0, s.n - 1)));
      return out;
    }
    UrnState left = s;
    for (std::int64_t i = 0; i < k; ++i) {
      const int colour = colour_of_index(left, rng.uniform_int(0, left.n - 1));
      tally(out, colour);
      --left.n;
      switch (colour) {
        case 0: --left.a; break;
        case 1: --left.b; break;
        case 2: --left.c; break;
        default: --left.d; break;
      }
    }
    return out;
  }

  if (scheme == SamplingScheme::WithReplacement) {
    const double n = static_cast<double>(s.n);
    out.v1 = rng.binomial(k, static_cast<double>(s.a) / n);
    std::int64_t rest = k - out.v1;
    const std::int64_t pool_b = s.n - s.a;
    out.v2 = pool_b > 0 ? rng.binomial(rest, static_cast<double>(s.b) / static_cast<double>(pool_b)) : 0;
    rest -= out.v2;
    const std::int64_t pool_c = s.c + s.d;
    out.v3 = pool_c > 0 ? rng.binomial(rest, static_cast<double>(s.c) / static_cast<double>(pool_c)) : 0;
    out.v4 = rest - out.v3;
    return out;
  }
  out.v1 = rng.hypergeometric(s.a, s.n - s.a, k);
  std::int64_t rest = k - out.v1;
  out.v2 = rng.hypergeometric(s.b, s.c + s.d, rest);
  rest -= out.v2;
  out.v3 = rng.hypergeometric(s.c, s.d, rest);
  out.v4 = rest - out.v3;
  return out;
}

}  // namespace

SampleCounts draw_sample_counts(const UrnState& state, SamplingScheme scheme, std::int64_t k,
                                RandomSource& rng, SamplerMode mode) {
  if (k < 1) raise(ErrorCode::InvalidSize, "sample size must be at least 1");
  if (state.n < 1) raise(ErrorCode::InvalidArgument, "cannot sample from an empty urn");
  if (scheme == SamplingScheme::WithoutReplacement && k > state.n)
    raise(ErrorCode::SampleSize, "sample size " + std::to_string(k) + " exceeds urn size " +
                                     std::to_string(state.n) + " without replacement");
  return mode == SamplerMode::Fast ? fast_counts(state, scheme, k, rng)
                                   : naive_indices(state, scheme, k, rng);
}

UrnState step(const UrnState& state, const ModelParams& params, SamplingScheme scheme,
              const ReinforcementSpec& reinforcement, const SampleSizeLaw& law,
              RandomSource& rng, SamplerMode mode) {
  const std::int64_t k = law.sample(state.n, rng);
  const SampleCounts v = draw_sample_counts(state, scheme, k, rng, mode);
  const double kd = static_cast<double>(k);
  const double f = reinforcement.f(static_cast<double>(v.v1) / kd, static_cast<double>(v.v2) / kd);
  if (!(f >= 0.0 && f <= 1.0))
    raise(ErrorCode::ReinforcementRange, "reinforcement value " + std::to_string(f) +
                                             " outside [0, 1]");
  const double g = selection_probability(params.p, f);

  // One uniform: [0, q1 g) colour 1, [q1 g, g) colour 3, [g, g + q2 (1-g)) colour 2.
  UrnState next = state;
  const double u = rng.uniform01();
  if (u < g) {
    if (u < params.q1 * g) ++next.a; else ++next.c;
  } else {
    if (u - g < params.q2 * (1.0 - g)) ++next.b; else ++next.d;
  }
  ++next.n;
  return next;
}

}  // namespace urnlab
