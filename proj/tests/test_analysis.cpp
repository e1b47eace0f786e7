#include <doctest.h>

#include <cmath>

#include "urnlab/analysis.hpp"

using namespace urnlab;

namespace {

ModelParams params_of(double p, double q1, double q2) {
  ModelParams m;
  m.p = p;
  m.q1 = q1;
  m.q2 = q2;
  return m;
}

// Ensemble whose final-checkpoint deviations are exact draws from N(0, cov).
EnsembleStats synthetic(const Matrix3& cov, const AsymptoticsReport& rep, int rows, RandomSource& rng) {
  EnsembleStats stats;
  stats.replications = rows;
  stats.centered_on_theory = true;
  stats.scaling = deviation_scaling(rep);
  Eigen::SelfAdjointEigenSolver<Matrix3> es(cov);
  const Matrix3 root = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  CheckpointStats cp;
  cp.n = 100000;
  for (int r = 0; r < rows; ++r) cp.deviations.push_back(root * Vector3(rng.normal(), rng.normal(), rng.normal()));
  sample_moments(cp.deviations, cp.deviation_mean, cp.deviation_cov);
  stats.checkpoints.push_back(cp);
  return stats;
}

const auto kLinearThird = ReinforcementSpec::affine(0.5, 1.0 / 3, -1.0 / 3);
const auto kLinearStrong = ReinforcementSpec::affine(0.5, 0.45, -0.45);

}  // namespace

TEST_CASE("slope fits") {
  std::vector<double> xs, inv, flat;
  for (double x : {1.0, 3.0, 10.0, 30.0, 100.0}) {
    xs.push_back(x);
    inv.push_back(1.0 / x);
    flat.push_back(0.7);
  }
  const SlopeFit a = fit_log_log(xs, inv);
  CHECK(a.slope == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(a.slope_stderr < 1e-12);
  CHECK(std::abs(fit_log_log(xs, flat).slope) < 1e-14);
  try {
    (void)fit_log_log({1, 2, 3, 4}, {1, -1, 1, 1});
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
  CHECK_THROWS_AS(fit_log_log({1, 2, 3}, {1, 2, 3}), Error);
}

TEST_CASE("hypergeometric gap decays like 1/n") {
  const auto square = ReinforcementSpec::quadratic(0, 0, 0, 1, 0, 0);
  const std::vector<double> mu{0.0, 1.0};
  std::vector<double> ns, gaps;
  for (double n : {50.0, 100.0, 200.0, 400.0, 800.0}) {
    ns.push_back(n);
    gaps.push_back(hypergeom_gap(square, params_of(1, 0.5, 0.5), mu, static_cast<std::int64_t>(n)).sup);
  }
  const double slope = fit_log_log(ns, gaps).slope;
  CHECK(slope >= -1.3);
  CHECK(slope <= -0.7);
}

TEST_CASE("synthetic Gaussian deviations pass the CLT comparison") {
  const auto fp = analyze_fixed_point(SelectionMap(MapKind::Direct, kLinearThird, params_of(1, 0.75, 0.75)));
  const auto rep = analyze_asymptotics(fp);
  REQUIRE(rep.sigma);
  RandomSource rng(31);
  int failures = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const auto verdicts = clt_check(synthetic(*rep.sigma, rep, 2000, rng), rep);
    CHECK(verdicts.size() == 9);
    failures += !all_pass(verdicts);
  }
  // At most 1% false failures; 5 of 200 leaves room for sampling noise.
  CHECK(failures <= 5);

  // A covariance twice too large is rejected.
  CHECK_FALSE(all_pass(clt_check(synthetic(2.0 * *rep.sigma, rep, 2000, rng), rep)));
}

TEST_CASE("CLT comparison rejects mismatched scalings") {
  const auto fp = analyze_fixed_point(SelectionMap(MapKind::Direct, kLinearThird, params_of(1, 0.75, 0.75)));
  const auto rep = analyze_asymptotics(fp);
  RandomSource rng(3);
  auto stats = synthetic(*rep.sigma, rep, 100, rng);
  stats.scaling.scaling = Scaling::SqrtN;
  CHECK_THROWS_AS(clt_check(stats, rep), Error);
  stats = synthetic(*rep.sigma, rep, 100, rng);
  stats.centered_on_theory = false;
  CHECK_THROWS_AS(clt_check(stats, rep), Error);
}

TEST_CASE("superdiffusive verdicts") {
  const auto fp = analyze_fixed_point(SelectionMap(MapKind::Direct, kLinearStrong, params_of(1, 0.9, 0.9)));
  const auto rep = analyze_asymptotics(fp);
  REQUIRE(rep.direction);
  RandomSource rng(8);
  const Matrix3 cov = *rep.direction * rep.direction->transpose() + 1e-4 * Matrix3::Identity();
  auto stats = synthetic(cov, rep, 2000, rng);
  auto later = synthetic(cov, rep, 2000, rng);
  stats.checkpoints[0].n = 10000;
  stats.checkpoints.push_back(later.checkpoints[0]);
  const auto verdicts = clt_check(stats, rep);
  REQUIRE(verdicts.size() == 2);
  CHECK(all_pass(verdicts));
  CHECK(verdicts[0].empirical == doctest::Approx(1.0).epsilon(0.15));

  stats.checkpoints[1] = synthetic(cov * 9.0, rep, 2000, rng).checkpoints[0];
  CHECK_FALSE(all_pass(clt_check(stats, rep)));
}

TEST_CASE("principal direction") {
  Matrix3 m = Matrix3::Zero();
  m(1, 1) = 4;
  m(0, 0) = 1;
  const Vector3 d = principal_direction(m);
  CHECK(std::abs(d[1]) == doctest::Approx(1.0));
}

TEST_CASE("strong law verdicts") {
  const auto fp = analyze_fixed_point(
      SelectionMap(MapKind::Direct, ReinforcementSpec::constant(0.5), params_of(1, 0.5, 0.5)));
  EnsembleStats stats;
  CheckpointStats cp;
  cp.n = 1000;
  cp.mean = Vector3(0.255, 0.245, 0.25);
  stats.checkpoints.push_back(cp);
  auto verdicts = strong_law_check(stats, fp);
  CHECK(verdicts.size() == 3);
  CHECK(all_pass(verdicts));
  stats.checkpoints[0].mean[2] = 0.27;
  CHECK_FALSE(all_pass(strong_law_check(stats, fp)));
}

TEST_CASE("bound checks") {
  const auto params = params_of(1, 0.5, 0.5);
  for (const auto& spec : builtin_reinforcement_samples())
    for (const auto& law : {SampleSizeLaw::fixed(4), SampleSizeLaw::uniform(), SampleSizeLaw::shifted_binomial(1, 0.3)}) {
      CAPTURE(spec.descriptor());
      CAPTURE(law.descriptor());
      const auto check = check_bernstein_bounds(spec, params, law, 100, 2e6);
      CHECK(check.violations == 0);
      CHECK(check.en_checked);
      CHECK_FALSE(check.bounds.empty());
    }
  const auto big = check_bernstein_bounds(ReinforcementSpec::logistic(2, 0), params, SampleSizeLaw::fixed(4), 10, 1e9);
  CHECK(big.resolution == 200);
  CHECK(big.stride == 1);
}
