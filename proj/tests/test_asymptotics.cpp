#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "urnlab/asymptotics.hpp"

using namespace urnlab;

namespace {

ModelParams params_of(double p, double q1, double q2) {
  ModelParams m;
  m.p = p;
  m.q1 = q1;
  m.q2 = q2;
  return m;
}

FixedPointReport solve(const ReinforcementSpec& spec, const ModelParams& params) {
  return analyze_fixed_point(SelectionMap(MapKind::Direct, spec, params));
}

double max_abs(const Matrix3& m) { return m.cwiseAbs().maxCoeff(); }

const auto kHalf = ReinforcementSpec::constant(0.5);
const auto kLinearThird = ReinforcementSpec::affine(0.5, 1.0 / 3, -1.0 / 3);
const auto kLinearStrong = ReinforcementSpec::affine(0.5, 0.45, -0.45);

}  // namespace

TEST_CASE("degenerate regime uses Gamma") {
  const auto fp = solve(kHalf, params_of(1, 0.5, 0.5));
  const auto rep = analyze_asymptotics(fp);
  CHECK(rep.regime == Regime::GaussianDegenerate);
  CHECK(rep.scaling == Scaling::SqrtN);
  Matrix3 gamma;
  gamma << 3, -1, -1, -1, 3, -1, -1, -1, 3;
  gamma /= 16.0;
  CHECK(max_abs(rep.matrices.gamma - gamma) < 1e-15);
  REQUIRE(rep.sigma);
  CHECK(max_abs(*rep.sigma - gamma) < 1e-15);
  CHECK(std::abs(rep.matrices.t.determinant()) < 1e-15);
  CHECK(max_abs(jacobian_at_root(fp).j + Matrix3::Identity()) == 0.0);
}

TEST_CASE("critical regime") {
  const auto fp = solve(kLinearThird, params_of(1, 0.75, 0.75));
  CHECK(classify_regime(fp) == Regime::Critical);
  const auto rep = analyze_asymptotics(fp);
  CHECK(rep.scaling == Scaling::SqrtNOverLogN);
  CHECK(rep.matrices.t.determinant() == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(rep.blocks.a(2, 2) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK_FALSE(rep.blocks.has_c);
  Matrix3 expected;
  expected << 0.5625, -0.5625, 0.1875, -0.5625, 0.5625, -0.1875, 0.1875, -0.1875, 0.0625;
  expected /= 3.0;
  REQUIRE(rep.sigma);
  CHECK(max_abs(*rep.sigma - expected) < 1e-12);
}

TEST_CASE("superdiffusive regime") {
  const auto fp = solve(kLinearStrong, params_of(1, 0.9, 0.9));
  const auto rep = analyze_asymptotics(fp);
  CHECK(rep.regime == Regime::Superdiffusive);
  CHECK(rep.scaling == Scaling::PowerRho);
  CHECK(rep.fp.rho == doctest::Approx(0.19).epsilon(1e-12));
  CHECK_FALSE(rep.sigma);
  REQUIRE(rep.direction);
  CHECK(rep.direction->norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(limit_covariance(rep), Error);
  const auto jac = jacobian_at_root(fp);
  CHECK(jac.eigenvalues[2] == doctest::Approx(-0.19).epsilon(1e-12));
  // The limit direction is a left eigenvector of J for -1 + kappa.
  const Vector3 left = jac.j.transpose() * *rep.direction;
  CHECK((left - (-0.19) * *rep.direction).norm() < 1e-12);
  CHECK(scale_factor(Scaling::PowerRho, 0.19, 1e4) == doctest::Approx(std::pow(1e4, 0.19)));
}

TEST_CASE("regime boundaries and hypotheses") {
  FixedPointReport fp = solve(kLinearThird, params_of(1, 0.75, 0.75));
  fp.kappa = 0.5 + 1e-10;
  CHECK(classify_regime(fp) == Regime::Critical);
  fp.kappa = -1.2;
  CHECK_THROWS_AS(classify_regime(fp), Error);
  fp.kappa = 1.0;
  CHECK_THROWS_AS(classify_regime(fp), Error);
  FixedPointReport raw;
  CHECK_THROWS_AS(classify_regime(raw), Error);
}

TEST_CASE("Gaussian regime against quadrature and Lyapunov oracles") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int cases = 0;
  while (cases < 5) {
    const double target = -0.9 + 1.35 * unit(gen);
    if (std::abs(target) < 0.05) continue;
    const double q1 = 0.5 + 0.45 * unit(gen);
    const double q2 = 0.5 + 0.45 * unit(gen);
    const double ay = -0.5 + unit(gen);
    const double ax = (target + q2 * ay) / q1;
    if (std::abs(ax) > 0.5) continue;
    const auto spec = ReinforcementSpec::affine(0.5, ax, ay);
    const auto fp = solve(spec, params_of(1, q1, q2));
    CAPTURE(fp.kappa);
    const auto rep = analyze_asymptotics(fp);
    REQUIRE(rep.regime == Regime::Gaussian);
    REQUIRE(rep.sigma);
    const Matrix3 j = jacobian_at_root(fp).j;
    const Matrix3 quad = oracle::covariance_quadrature(j, rep.matrices.gamma);
    CHECK(max_abs(*rep.sigma - quad) < 1e-6);
    CHECK(max_abs(*rep.sigma - oracle::covariance_lyapunov(j, rep.matrices.gamma)) < 1e-10);
    CHECK(rep.matrices.t.determinant() == doctest::Approx(-fp.kappa).epsilon(1e-10));
    REQUIRE(rep.matrices.has_tbar);
    CHECK(rep.matrices.tbar.determinant() == doctest::Approx(q2 / fp.alpha_star).epsilon(1e-10));
    const Matrix3 diag = rep.matrices.t.inverse() * j * rep.matrices.t;
    Matrix3 expected = Matrix3::Zero();
    expected.diagonal() << -1.0, -1.0, -1.0 + fp.kappa;
    CHECK(max_abs(diag - expected) < 1e-10);
    Eigen::SelfAdjointEigenSolver<Matrix3> es(*rep.sigma);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    CHECK(max_abs(*rep.sigma - rep.sigma->transpose()) < 1e-14);
    ++cases;
  }
}

TEST_CASE("Jordan regime against quadrature") {
  const double q1 = 0.6, q2 = 0.8, ay = 0.3;
  const double ax = q2 * ay / q1;
  const auto fp = solve(ReinforcementSpec::affine(0.3, ax, ay), params_of(1, q1, q2));
  const auto rep = analyze_asymptotics(fp);
  CHECK(rep.regime == Regime::GaussianJordan);
  REQUIRE(rep.sigma);
  const Matrix3 j = jacobian_at_root(fp).j;
  CHECK(max_abs(*rep.sigma - oracle::covariance_quadrature(j, rep.matrices.gamma)) < 1e-6);
  CHECK(rep.matrices.tbar.determinant() == doctest::Approx(q2 / fp.alpha_star).epsilon(1e-10));
}

TEST_CASE("Gamma is positive semi-definite") {
  const auto logistic = ReinforcementSpec::logistic(3, 0.1);
  for (double q1 : {0.2, 0.5, 0.9})
    for (double q2 : {0.3, 0.7}) {
      const auto fp = analyze_fixed_point(SelectionMap(MapKind::Smoothed, logistic, params_of(0.8, q1, q2), {0.5, 0.5}));
      const auto m = structural_matrices(fp);
      Eigen::SelfAdjointEigenSolver<Matrix3> es(m.gamma);
      CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("Jacobian eigenvalues") {
  for (const auto& [spec, params] :
       {std::pair{kLinearStrong, params_of(1, 0.9, 0.9)}, std::pair{kLinearThird, params_of(1, 0.75, 0.75)},
        std::pair{ReinforcementSpec::affine(0.5, -0.4, 0.2), params_of(1, 0.6, 0.7)}}) {
    const auto info = jacobian_at_root(solve(spec, params));
    auto closed = info.eigenvalues;
    std::sort(closed.begin(), closed.end());
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(info.numeric_eigenvalues[i].imag()) < 1e-10);
      CHECK(std::abs(info.numeric_eigenvalues[i].real() - closed[i]) < 1e-10);
    }
  }
}

TEST_CASE("mean-field ODE") {
  SUBCASE("constant g has the exponential solution") {
    const auto params = params_of(1, 0.6, 0.4);
    const SelectionMap map(MapKind::Direct, ReinforcementSpec::constant(0.3), params);
    const SimplexPoint x0{0.7, 0.1};
    const auto path = integrate_mean_field(map, x0, 1e-3, 1.0, 100);
    const double e = std::exp(-1.0);
    CHECK(path.times.back() == doctest::Approx(1.0));
    CHECK(std::abs(path.points.back().x - (0.18 + (0.7 - 0.18) * e)) < 1e-6);
    CHECK(std::abs(path.points.back().y - (0.28 + (0.1 - 0.28) * e)) < 1e-6);
  }
  SUBCASE("contracting maps reach the root") {
    const auto logistic = ReinforcementSpec::logistic(2, -0.3);
    const std::vector<SelectionMap> maps{
        SelectionMap(MapKind::Direct, kLinearThird, params_of(1, 0.75, 0.75)),
        SelectionMap(MapKind::Smoothed, logistic, params_of(0.8, 0.6, 0.7), {0.2, 0.3, 0.5})};
    for (const auto& map : maps) {
      const auto fp = analyze_fixed_point(map);
      for (const SimplexPoint init : {SimplexPoint{0, 0}, SimplexPoint{1, 0}, SimplexPoint{0, 1}, SimplexPoint{0.2, 0.3}}) {
        const auto path = integrate_mean_field(map, init, 0.01, 50.0, 50);
        for (const auto& pt : path.points) {
          CHECK(pt.x >= -1e-9);
          CHECK(pt.y >= -1e-9);
          CHECK(pt.x + pt.y <= 1 + 1e-9);
        }
        CHECK(std::abs(path.points.back().x - fp.x_star) < 1e-8);
        CHECK(std::abs(path.points.back().y - fp.y_star) < 1e-8);
      }
    }
  }
  SUBCASE("a root is stationary") {
    const SelectionMap map(MapKind::Direct, kLinearThird, params_of(1, 0.75, 0.75));
    const auto path = integrate_mean_field(map, {0.375, 0.375}, 0.1, 5.0);
    for (const auto& pt : path.points) CHECK(std::abs(pt.x - 0.375) < 1e-14);
  }
  SUBCASE("bad steps") {
    const SelectionMap map(MapKind::Direct, kHalf, params_of(1, 0.5, 0.5));
    CHECK_THROWS_AS(integrate_mean_field(map, {0.2, 0.2}, 0.5, 1.0), Error);
    CHECK_THROWS_AS(integrate_mean_field(map, {0.8, 0.8}, 0.01, 1.0), Error);
  }
}
