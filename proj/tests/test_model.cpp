#include <doctest.h>

#include <cmath>
#include <map>

#include "urnlab/model.hpp"
#include "urnlab/reinforcement.hpp"
#include "urnlab/sample_laws.hpp"

using namespace urnlab;

namespace {

// Two-sample Pearson statistic between two count tables, with
// cells of small expectation pooled.
double chi_square(const std::map<std::array<std::int64_t, 4>, std::int64_t>& a,
                  const std::map<std::array<std::int64_t, 4>, std::int64_t>& b, int& dof) {
  std::map<std::array<std::int64_t, 4>, std::pair<double, double>> cells;
  double na = 0, nb = 0;
  for (auto& [k, v] : a) { cells[k].first += v; na += v; }
  for (auto& [k, v] : b) { cells[k].second += v; nb += v; }
  double stat = 0.0;
  dof = -1;
  double pool_a = 0, pool_b = 0;
  auto add = [&](double oa, double ob) {
    const double tot = oa + ob;
    const double ea = tot * na / (na + nb), eb = tot * nb / (na + nb);
    stat += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
    ++dof;
  };
  for (auto& [k, v] : cells) {
    if (v.first + v.second < 20) {
      pool_a += v.first;
      pool_b += v.second;
      continue;
    }
    add(v.first, v.second);
  }
  if (pool_a + pool_b > 0) add(pool_a, pool_b);
  return stat;
}

// Upper 1e-3 quantile of chi-square with d degrees of freedom
// (Wilson-Hilferty).
double chi_square_critical(int d) {
  const double z = 3.090232306167813;
  const double t = 1.0 - 2.0 / (9.0 * d) + z * std::sqrt(2.0 / (9.0 * d));
  return d * t * t * t;
}

}  // namespace

TEST_CASE("params validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  p.q1 = 1.0;
  CHECK_THROWS_AS(p.validate(), Error);
  CHECK_NOTHROW(p.validate(true));
  p.q1 = 0.5;
  p.N = 0;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("init_history degenerate cases") {
  RandomSource rng(7);
  ModelParams p;
  p.q = 1;
  p.q1 = 1;
  p.N = 5;
  CHECK(init_history(p, rng) == UrnState{5, 5, 0, 0, 0});
  p.q = 0;
  p.N = 4;
  const UrnState s = init_history(p, rng);
  CHECK(s.a == 0);
  CHECK(s.c == 0);
  CHECK(s.b + s.d == 4);
}

TEST_CASE("init_history proportions") {
  RandomSource rng(11);
  ModelParams p;
  p.N = 100000;
  const UrnState s = init_history(p, rng);
  CHECK(s.balanced());
  CHECK(std::abs(static_cast<double>(s.a) / p.N - 0.25) < 0.01);
  // Direct binomial oracle for the same proportion.
  RandomSource rng2(12);
  const double direct = static_cast<double>(rng2.binomial(p.N, 0.25)) / p.N;
  CHECK(std::abs(direct - 0.25) < 0.01);
}

TEST_CASE("walker position") {
  CHECK(walker_position({4, 3, 0, 1, 0}) == 4);
  CHECK(walker_position({4, 0, 2, 0, 2}) == -4);
  CHECK(walker_position({4, 1, 1, 1, 1}) == 0);
}

TEST_CASE("draw_sample_counts edge cases") {
  RandomSource rng(3);
  const UrnState all_a{10, 10, 0, 0, 0};
  for (auto scheme : {SamplingScheme::WithReplacement, SamplingScheme::WithoutReplacement}) {
    const SampleCounts c = draw_sample_counts(all_a, scheme, 3, rng);
    CHECK(c.v1 == 3);
    CHECK(c.v2 + c.v3 + c.v4 == 0);
  }
  const UrnState mixed{10, 3, 4, 2, 1};
  for (auto mode : {SamplerMode::Fast, SamplerMode::NaiveIndices}) {
    const SampleCounts c = draw_sample_counts(mixed, SamplingScheme::WithoutReplacement, 10, rng, mode);
    CHECK(c.v1 == 3);
    CHECK(c.v2 == 4);
    CHECK(c.v3 == 2);
    CHECK(c.v4 == 1);
  }
  CHECK_THROWS_AS(draw_sample_counts(mixed, SamplingScheme::WithoutReplacement, 11, rng), Error);
  CHECK_THROWS_AS(draw_sample_counts(mixed, SamplingScheme::WithReplacement, 0, rng), Error);
  // k > n is allowed with replacement.
  const SampleCounts big = draw_sample_counts(mixed, SamplingScheme::WithReplacement, 25, rng);
  CHECK(big.v1 + big.v2 + big.v3 + big.v4 == 25);
}

TEST_CASE("hypergeometric two-from-four") {
  RandomSource rng(5);
  const UrnState s{4, 2, 2, 0, 0};
  int hits = 0;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i)
    hits += draw_sample_counts(s, SamplingScheme::WithoutReplacement, 2, rng).v1 == 1;
  const double se = std::sqrt((2.0 / 3) * (1.0 / 3) / draws);
  CHECK(std::abs(hits / double(draws) - 2.0 / 3) < 4 * se);
}

TEST_CASE("fast and naive samplers agree in law") {
  const UrnState state{40, 11, 9, 12, 8};
  for (auto scheme : {SamplingScheme::WithReplacement, SamplingScheme::WithoutReplacement})
    for (std::int64_t k : {3, 7, 25}) {
      CAPTURE(k);
      RandomSource ra(100 + k), rb(200 + k);
      std::map<std::array<std::int64_t, 4>, std::int64_t> fa, fb;
      for (int i = 0; i < 100000; ++i) {
        const auto a = draw_sample_counts(state, scheme, k, ra, SamplerMode::Fast);
        const auto b = draw_sample_counts(state, scheme, k, rb, SamplerMode::NaiveIndices);
        ++fa[{a.v1, a.v2, a.v3, a.v4}];
        ++fb[{b.v1, b.v2, b.v3, b.v4}];
      }
      int dof = 0;
      const double stat = chi_square(fa, fb, dof);
      CAPTURE(dof);
      CHECK(stat < chi_square_critical(std::max(dof, 1)));
    }
}

TEST_CASE("step increments exactly one colour") {
  RandomSource rng(9);
  ModelParams p;
  p.p = 0.8;
  p.q1 = 0.7;
  p.q2 = 0.4;
  p.N = 3;
  const auto spec = ReinforcementSpec::affine(0.5, 0.45, -0.45);
  const auto law = SampleSizeLaw::uniform();
  UrnState s = init_history(p, rng);
  for (int i = 0; i < 2000; ++i) {
    const UrnState next = step(s, p, SamplingScheme::WithoutReplacement, spec, law, rng);
    CHECK(next.n == s.n + 1);
    const std::int64_t changed = (next.a - s.a) + (next.b - s.b) + (next.c - s.c) + (next.d - s.d);
    CHECK(changed == 1);
    CHECK(next.a >= s.a);
    CHECK(next.b >= s.b);
    CHECK(next.c >= s.c);
    CHECK(next.d >= s.d);
    CHECK(walker_position(next) == 2 * (next.a + next.c) - next.n);
    s = next;
  }
}

TEST_CASE("colour probabilities") {
  ModelParams p;
  p.q1 = 0.3;
  p.q2 = 0.8;
  for (double g : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    const auto pr = colour_probabilities(p, g);
    CHECK(std::abs(pr[0] + pr[1] + pr[2] + pr[3] - 1.0) < 1e-12);
  }
  const auto one = colour_probabilities(p, 1.0);
  CHECK(one[0] == doctest::Approx(0.3));
  CHECK(one[1] == 0.0);
  CHECK(one[2] == doctest::Approx(0.7));
  CHECK(one[3] == 0.0);
}

TEST_CASE("p = 1/2 gives colour one with probability q1/2") {
  RandomSource rng(21);
  ModelParams p;
  p.p = 0.5;
  p.q1 = 0.6;
  p.N = 10;
  const auto spec = ReinforcementSpec::affine(0.5, 0.45, -0.45);
  const auto law = SampleSizeLaw::fixed(3);
  const UrnState base{10, 10, 0, 0, 0};
  int hits = 0;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i)
    hits += step(base, p, SamplingScheme::WithReplacement, spec, law, rng).a == 11;
  const double se = std::sqrt(0.3 * 0.7 / draws);
  CHECK(std::abs(hits / double(draws) - 0.3) < 4 * se);
}

TEST_CASE("reinforcement out of range is reported") {
  try {
    (void)ReinforcementSpec::custom(
        "bad", [](double x, double) { return 1.5 * x; }, SmoothnessInfo{Smoothness::C2, 1.5, 1.0, {}, {}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ReinforcementRange);
  }
}

TEST_CASE("alternative initializations share the same limit") {
  ModelParams p;
  p.p = 1;
  p.q1 = 0.75;
  p.q2 = 0.75;
  p.N = 50;
  const auto spec = ReinforcementSpec::affine(0.5, 0.25, -0.25);
  const auto law = SampleSizeLaw::fixed(5);
  double means[2] = {0, 0};
  const UrnState starts[2] = {{50, 50, 0, 0, 0}, {50, 0, 50, 0, 0}};
  for (int s = 0; s < 2; ++s)
    for (int r = 0; r < 20; ++r) {
      RandomSource rng = RandomSource::for_replication(77, 20 * s + r);
      UrnState st = starts[s];
      while (st.n < 100000) st = step(st, p, SamplingScheme::WithReplacement, spec, law, rng);
      means[s] += st.a / 1e5 / 20;
    }
  CHECK(std::abs(means[0] - means[1]) < 0.01);
  CHECK(std::abs(means[0] - 0.375) < 0.01);
}
