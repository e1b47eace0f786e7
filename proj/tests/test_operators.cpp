#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "urnlab/analysis.hpp"
#include "urnlab/operators.hpp"

using namespace urnlab;

namespace {

ModelParams identity_params() {
  ModelParams p;
  p.p = 1.0;
  return p;
}

std::vector<double> delta_at(std::int64_t k) {
  std::vector<double> mu(static_cast<std::size_t>(k), 0.0);
  mu.back() = 1.0;
  return mu;
}

const auto kSquare = ReinforcementSpec::quadratic(0, 0, 0, 1, 0, 0);

std::vector<SimplexPoint> probe_points() {
  std::vector<SimplexPoint> pts;
  for (int i = 0; i <= 8; ++i)
    for (int j = 0; i + j <= 8; ++j) pts.push_back({i / 8.0, j / 8.0});
  pts.push_back({0.123, 0.456});
  pts.push_back({0.9, 0.05});
  return pts;
}

}  // namespace

TEST_CASE("h0 examples") {
  const auto params = identity_params();
  for (std::int64_t k : {1, 2, 3, 7}) {
    const auto mu = delta_at(k);
    for (double x : {0.0, 0.2, 0.5, 0.9})
      CHECK(h0_eval(kSquare, params, mu, {x, 0.05}) == doctest::Approx(x * x + x * (1 - x) / k).epsilon(1e-13));
  }
  const auto c = ReinforcementSpec::constant(0.3);
  CHECK(h0_eval(c, params, delta_at(5), {0.2, 0.3}) == doctest::Approx(0.3).epsilon(1e-15));
  ModelParams half;
  half.p = 0.5;
  CHECK(h0_eval(kSquare, half, delta_at(3), {0.2, 0.3}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("h0 agrees with brute-force trinomial sums") {
  const auto params = identity_params();
  const std::vector<double> mu{0.1, 0.2, 0.3, 0.4};
  for (const auto& spec : builtin_reinforcement_samples())
    for (const auto& pt : probe_points()) {
      CAPTURE(spec.descriptor());
      double expected = 0.0;
      for (std::size_t k = 1; k <= mu.size(); ++k)
        expected += mu[k - 1] * oracle::trinomial_expectation([&](double a, double b) { return spec.f(a, b); },
                                                             static_cast<std::int64_t>(k), pt.x, pt.y);
      CHECK(std::abs(h0_eval(spec, params, mu, pt) - expected) < 1e-12);
    }
}

TEST_CASE("hn with a fixed law equals h0 with a point mass") {
  const auto params = identity_params();
  for (const auto& spec : builtin_reinforcement_samples())
    for (const auto& pt : probe_points())
      CHECK(std::abs(hn_eval(spec, params, SampleSizeLaw::fixed(6), 50, pt) -
                     h0_eval(spec, params, delta_at(6), pt)) < 1e-14);
}

TEST_CASE("hn agrees with a brute-force mixture") {
  const auto params = identity_params();
  const auto spec = ReinforcementSpec::logistic(3.0, 0.2);
  for (const auto& law : {SampleSizeLaw::uniform(), SampleSizeLaw::shifted_binomial(1, 0.3),
                          SampleSizeLaw::truncated_poisson(1, 0.7), SampleSizeLaw::truncated_geometric(1, 0.7)}) {
    const std::int64_t n = 30;
    const SimplexPoint pt{0.3, 0.25};
    double expected = 0.0;
    for (std::int64_t k = 1; k <= n; ++k)
      expected += law.pmf(n, k) * oracle::trinomial_expectation([&](double a, double b) { return spec.f(a, b); }, k,
                                                                pt.x, pt.y);
    CAPTURE(law.descriptor());
    CHECK(std::abs(hn_eval(spec, params, law, n, pt) - expected) < 1e-12);
  }
}

TEST_CASE("fn examples and brute-force agreement") {
  const auto params = identity_params();
  CHECK(fn_eval(kSquare, params, delta_at(2), {4, 2, 0}) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  // One draw: the value at each colour weighted by its share.
  const auto spec = ReinforcementSpec::logistic(2.0, -0.1);
  const LatticePoint lp{10, 3, 5};
  const double single = 0.3 * spec.f(1, 0) + 0.5 * spec.f(0, 1) + 0.2 * spec.f(0, 0);
  CHECK(fn_eval(spec, params, delta_at(1), lp) == doctest::Approx(single).epsilon(1e-14));
  CHECK(fn_eval(spec, params, delta_at(1), lp) ==
        doctest::Approx(h0_eval(spec, params, delta_at(1), {0.3, 0.5})).epsilon(1e-14));

  const std::vector<double> mu{0.25, 0.25, 0.5};
  for (const auto& s : builtin_reinforcement_samples())
    for (std::int64_t n : {3, 7, 12})
      for (std::int64_t r1 = 0; r1 <= n; r1 += 2)
        for (std::int64_t r2 = 0; r1 + r2 <= n; r2 += 3) {
          double expected = 0.0;
          for (std::int64_t k = 1; k <= 3; ++k)
            expected += mu[k - 1] * oracle::hypergeometric_expectation([&](double a, double b) { return s.f(a, b); },
                                                                       k, n, r1, r2);
          CHECK(std::abs(fn_eval(s, params, mu, {n, r1, r2}) - expected) < 1e-12);
        }
  CHECK_THROWS_AS(fn_eval(spec, params, delta_at(5), {4, 1, 1}), Error);
  CHECK_THROWS_AS(en_eval(spec, params, SampleSizeLaw::fixed(5), {4, 1, 1}), Error);
}

TEST_CASE("affine reproduction by all four operators") {
  const auto params = identity_params();
  const auto spec = ReinforcementSpec::affine(0.2, 0.5, -0.1);
  const std::vector<double> mu{0.2, 0.2, 0.2, 0.2, 0.2};
  for (const auto& pt : probe_points()) {
    const double g = spec.f(pt.x, pt.y);
    CHECK(std::abs(h0_eval(spec, params, mu, pt) - g) <= 1e-12);
    for (const auto& law : {SampleSizeLaw::uniform(), SampleSizeLaw::shifted_binomial(1, 0.3)})
      for (std::int64_t n : {10, 200}) CHECK(std::abs(hn_eval(spec, params, law, n, pt) - g) <= 1e-12);
  }
  for (std::int64_t n : {5, 40})
    for (std::int64_t r1 = 0; r1 <= n; ++r1)
      for (std::int64_t r2 = 0; r1 + r2 <= n; ++r2) {
        const double g = spec.f(double(r1) / n, double(r2) / n);
        CHECK(std::abs(fn_eval(spec, params, mu, {n, r1, r2}) - g) <= 1e-12);
        CHECK(std::abs(en_eval(spec, params, SampleSizeLaw::uniform(), {n, r1, r2}) - g) <= 1e-12);
      }
}

TEST_CASE("Monte Carlo agreement") {
  std::mt19937_64 gen(77);
  RandomSource rng(99);
  const auto specs = builtin_reinforcement_samples();
  const std::vector<SampleSizeLaw> laws{SampleSizeLaw::fixed(3), SampleSizeLaw::uniform(),
                                        SampleSizeLaw::shifted_binomial(1, 0.3),
                                        SampleSizeLaw::truncated_poisson(1, 0.7)};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int draws = 100000;
  for (int trial = 0; trial < 20; ++trial) {
    const auto& spec = specs[trial % specs.size()];
    const auto& law = laws[trial % laws.size()];
    const std::int64_t n = 20 + 5 * trial;
    ModelParams params;
    params.p = 0.2 + 0.6 * unit(gen);
    const std::int64_t r1 = std::uniform_int_distribution<std::int64_t>(0, n)(gen);
    const std::int64_t r2 = std::uniform_int_distribution<std::int64_t>(0, n - r1)(gen);
    const SimplexPoint pt{double(r1) / n, double(r2) / n};
    CAPTURE(spec.descriptor());
    CAPTURE(law.descriptor());
    CAPTURE(n);

    double s = 0, s2 = 0, t = 0, t2 = 0;
    for (int d = 0; d < draws; ++d) {
      const std::int64_t k = law.sample(n, rng);
      const std::int64_t v1 = rng.binomial(k, pt.x);
      const std::int64_t v2 = pt.x < 1 ? rng.binomial(k - v1, pt.y / (1 - pt.x)) : 0;
      const double g = eval_g(spec, params, {double(v1) / k, double(v2) / k});
      s += g;
      s2 += g * g;
      const std::int64_t w1 = rng.hypergeometric(r1, n - r1, k);
      const std::int64_t w2 = rng.hypergeometric(r2, n - r1 - r2, k - w1);
      const double h = eval_g(spec, params, {double(w1) / k, double(w2) / k});
      t += h;
      t2 += h * h;
    }
    const auto check = [&](double sum, double sum2, double exact) {
      const double mean = sum / draws;
      const double se = std::sqrt(std::max(sum2 / draws - mean * mean, 0.0) / draws);
      CHECK(std::abs(mean - exact) <= 4 * se + 1e-12);
    };
    check(s, s2, hn_eval(spec, params, law, n, pt));
    check(t, t2, en_eval(spec, params, law, {n, r1, r2}));
  }
}

TEST_CASE("gap bound examples") {
  const auto params = identity_params();
  SmoothnessInfo lip;
  lip.level = Smoothness::Holder;
  lip.holder_constant = 1.0;
  lip.holder_exponent = 1.0;
  const auto identity = ReinforcementSpec::custom("identity", [](double x, double) { return x; }, lip);
  const auto a = bernstein_gap_bound(identity, params, SampleSizeLaw::fixed(4), 100, GapLemma::Holder);
  CHECK(a.bound == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-14));
  const auto b = bernstein_gap_bound(kSquare, params, SampleSizeLaw::fixed(10), 100, GapLemma::Hessian);
  CHECK(b.bound == doctest::Approx(0.15).epsilon(1e-14));
  CHECK(bernstein_gap_bound(ReinforcementSpec::constant(0.4), params, SampleSizeLaw::uniform(), 10,
                            GapLemma::Hessian)
            .bound == 0.0);
  CHECK_THROWS_AS(bernstein_gap_bound(identity, params, SampleSizeLaw::fixed(4), 10, GapLemma::Hessian), Error);
  const auto lemmas = applicable_lemmas(kSquare);
  CHECK(lemmas.size() == 3);
}

TEST_CASE("measured gaps respect the certified bounds") {
  const auto params = identity_params();
  for (const auto& spec : builtin_reinforcement_samples())
    for (const auto& law : {SampleSizeLaw::fixed(4), SampleSizeLaw::uniform()})
      for (std::int64_t n : {10, 100}) {
        CAPTURE(spec.descriptor());
        CAPTURE(law.descriptor());
        const auto hn = grid_sup_hn_gap(spec, params, law, n, 30);
        const auto en = lattice_sup_en_gap(spec, params, law, n, n <= 10 ? 1 : 7);
        for (GapLemma lemma : applicable_lemmas(spec)) {
          const double bound = bernstein_gap_bound(spec, params, law, n, lemma).bound;
          CHECK(hn.sup <= bound + kGapRounding);
          CHECK(en.sup <= bound + kGapRounding);
        }
      }
}

TEST_CASE("hypergeometric gap") {
  const auto params = identity_params();
  const auto mu = delta_at(2);
  CHECK(std::abs(fn_eval(kSquare, params, mu, {4, 2, 0}) - h0_eval(kSquare, params, mu, {0.5, 0.0})) ==
        doctest::Approx(1.0 / 24).epsilon(1e-13));
  CHECK(hypergeom_gap(kSquare, params, mu, 4).sup >= 1.0 / 24 - 1e-15);
  CHECK(hypergeom_gap(ReinforcementSpec::affine(0.1, 0.3, 0.4), params, mu, 50).sup < 1e-12);
  double previous = 0.0;
  for (std::int64_t n : {50, 100, 200}) {
    const auto gap = hypergeom_gap(kSquare, params, mu, n);
    CHECK_FALSE(gap.approximate);
    CHECK(n * gap.sup < 1.0);
    if (previous > 0) CHECK(gap.sup < previous);
    previous = gap.sup;
  }
}

TEST_CASE("drift") {
  ModelParams params;
  params.p = 1.0;
  params.q1 = 0.75;
  params.q2 = 0.75;
  const auto lin = ReinforcementSpec::affine(0.5, 1.0 / 3, -1.0 / 3);
  const SelectionMap direct(MapKind::Direct, lin, params);
  const auto h = drift(direct, SimplexPoint{0.375, 0.375});
  CHECK(std::abs(h[0]) < 1e-15);
  CHECK(std::abs(h[1]) < 1e-15);
  const auto c = ReinforcementSpec::constant(0.3);
  const SelectionMap flat(MapKind::Smoothed, c, params, {0.0, 1.0});
  const auto o = drift(flat, SimplexPoint{0.0, 0.0});
  CHECK(o[0] == doctest::Approx(0.75 * 0.3));
  CHECK(o[1] == doctest::Approx(0.75 * 0.7));
  const auto g = drift(flat, std::array<double, 3>{0.1, 0.2, 0.05});
  CHECK(g[2] == doctest::Approx(0.25 * 0.3 - 0.05));
  CHECK_THROWS_AS(drift(flat, std::array<double, 3>{0.5, 0.5, 0.2}), Error);
  CHECK(SelectionMap::for_law(c, params, SampleSizeLaw::fixed(3)).kind == MapKind::Smoothed);
  CHECK(SelectionMap::for_law(c, params, SampleSizeLaw::uniform()).kind == MapKind::Direct);
}

TEST_CASE("guards") {
  const auto params = identity_params();
  std::vector<double> wide(100, 0.01);
  CHECK_THROWS_AS(h0_eval(kSquare, params, wide, {0.2, 0.2}), Error);
  CHECK_THROWS_AS(h0_eval(kSquare, params, delta_at(2), {0.8, 0.8}), Error);
  CHECK_THROWS_AS(h0_eval(kSquare, params, std::vector<double>{0.5, 0.6}, {0.2, 0.2}), Error);
  OperatorOptions tight;
  tight.max_cost = 10;
  CHECK_THROWS_AS(hn_eval(kSquare, params, SampleSizeLaw::uniform(), 100, {0.2, 0.2}, tight), Error);
}

TEST_CASE("smoothed map gradient matches finite differences") {
  ModelParams params;
  params.p = 0.8;
  const auto spec = ReinforcementSpec::logistic(2.0, 0.1);
  const SelectionMap map(MapKind::Smoothed, spec, params, {0.3, 0.3, 0.4});
  for (const auto& pt : {SimplexPoint{0.2, 0.3}, SimplexPoint{0.5, 0.1}, SimplexPoint{0.1, 0.8}}) {
    const auto exact = map.gradient(pt);
    const auto fd = numeric_gradient([&](double x, double y) { return map.value({x, y}); }, pt);
    CHECK(exact.dx == doctest::Approx(fd.dx).epsilon(1e-6));
    CHECK(exact.dy == doctest::Approx(fd.dy).epsilon(1e-6));
  }
}
