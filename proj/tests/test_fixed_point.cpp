#include <doctest.h>

#include <cmath>
#include <random>

#include "urnlab/fixed_point.hpp"

using namespace urnlab;

namespace {

ModelParams params_of(double p, double q1, double q2) {
  ModelParams m;
  m.p = p;
  m.q1 = q1;
  m.q2 = q2;
  return m;
}

const auto kLinearThird = ReinforcementSpec::affine(0.5, 1.0 / 3, -1.0 / 3);
const auto kLinearStrong = ReinforcementSpec::affine(0.5, 0.45, -0.45);

}  // namespace

TEST_CASE("contraction margin examples") {
  const auto c = ReinforcementSpec::constant(0.3);
  CHECK(contraction_margin(SelectionMap(MapKind::Direct, c, params_of(1, 0.5, 0.5))) == 0.0);
  CHECK(contraction_margin(SelectionMap(MapKind::Direct, kLinearStrong, params_of(1, 0.9, 0.9))) ==
        doctest::Approx(0.81).epsilon(1e-12));
  const auto id = ReinforcementSpec::affine(0, 1, 0);
  CHECK(contraction_margin(SelectionMap(MapKind::Direct, id, params_of(1, 0.6, 0.6))) ==
        doctest::Approx(1.2).epsilon(1e-12));
  const auto rough = ReinforcementSpec::holder_power(1.0, 0.5);
  CHECK(std::isinf(contraction_margin(SelectionMap(MapKind::Direct, rough, params_of(1, 0.5, 0.5)))));
}

TEST_CASE("worked fixed points") {
  SUBCASE("constant") {
    const auto params = params_of(1, 0.6, 0.4);
    const auto fp = analyze_fixed_point(SelectionMap(MapKind::Direct, ReinforcementSpec::constant(0.3), params));
    CHECK(fp.x_star == doctest::Approx(0.18).epsilon(1e-13));
    CHECK(fp.y_star == doctest::Approx(0.28).epsilon(1e-13));
    CHECK(fp.residual <= 1e-12);
    CHECK(fp.alpha_star == 0.0);
    CHECK(fp.beta_star == 0.0);
    CHECK(fp.kappa == 0.0);
    CHECK(fp.rho == 1.0);
  }
  SUBCASE("memoryless") {
    const auto params = params_of(0.5, 0.7, 0.3);
    const auto fp = analyze_fixed_point(
        SelectionMap(MapKind::Smoothed, ReinforcementSpec::logistic(4, 0.2), params, {0.5, 0.5}));
    CHECK(fp.x_star == doctest::Approx(0.35).epsilon(1e-13));
    CHECK(fp.y_star == doctest::Approx(0.15).epsilon(1e-13));
    CHECK(fp.residual <= 1e-12);
  }
  SUBCASE("linear third") {
    const auto params = params_of(1, 0.75, 0.75);
    const auto fp = analyze_fixed_point(SelectionMap(MapKind::Direct, kLinearThird, params));
    CHECK(std::abs(fp.x_star - 0.375) < 1e-12);
    CHECK(std::abs(fp.y_star - 0.375) < 1e-12);
    CHECK(std::abs(fp.z_star - 0.125) < 1e-12);
    CHECK(fp.kappa == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(fp.rho == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(fp.residual <= 1e-12);
  }
  SUBCASE("strong linear") {
    const auto fp = analyze_fixed_point(SelectionMap(MapKind::Direct, kLinearStrong, params_of(1, 0.9, 0.9)));
    CHECK(fp.kappa == doctest::Approx(0.81).epsilon(1e-14));
    CHECK(fp.rho == doctest::Approx(0.19).epsilon(1e-12));
  }
}

TEST_CASE("margin above one is reported but iteration proceeds") {
  const auto id = ReinforcementSpec::affine(0, 1, 0);
  const auto fp = analyze_fixed_point(SelectionMap(MapKind::Direct, id, params_of(1, 0.6, 0.6)));
  CHECK(fp.margin == doctest::Approx(1.2));
  CHECK_FALSE(fp.caveats.empty());
  CHECK(fp.residual <= 1e-12);
}

TEST_CASE("non-convergence carries the last iterate") {
  FixedPointOptions opts;
  opts.max_iter = 3;
  try {
    (void)solve_fixed_point(SelectionMap(MapKind::Direct, kLinearStrong, params_of(1, 0.9, 0.9)),
                            [&] {
                              auto o = opts;
                              o.has_start = true;
                              o.start = {0.1, 0.7};
                              return o;
                            }());
    FAIL("expected a convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(e.code() == ErrorCode::Convergence);
    CHECK(e.last().x + e.last().y <= 1.0 + 1e-12);
  }
}

TEST_CASE("properties over assorted maps") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto logistic = ReinforcementSpec::logistic(2, -0.3);
  const auto quadratic = ReinforcementSpec::quadratic(0.2, 0.3, 0.1, 0.2, -0.1, 0.1);
  std::vector<SelectionMap> maps;
  maps.emplace_back(MapKind::Direct, kLinearThird, params_of(1, 0.75, 0.75));
  maps.emplace_back(MapKind::Direct, kLinearStrong, params_of(1, 0.9, 0.9));
  maps.emplace_back(MapKind::Smoothed, logistic, params_of(0.8, 0.6, 0.7),
                    std::vector<double>{0.2, 0.3, 0.5});
  maps.emplace_back(MapKind::Direct, quadratic, params_of(0.3, 0.55, 0.8));
  for (const auto& map : maps) {
    const FixedPointReport fp = analyze_fixed_point(map);
    REQUIRE(fp.margin < 1.0);
    CHECK(fp.residual <= 1e-12);
    CHECK(fp.x_star >= 0);
    CHECK(fp.y_star >= 0);
    CHECK(fp.x_star + fp.y_star <= 1);
    CHECK(fp.z_star == doctest::Approx((1 - map.params.q1) * fp.x_star / map.params.q1).epsilon(1e-14));
    CHECK(fp.rho == std::min(1.0, 1.0 - fp.kappa));
    const double s = map.value({fp.x_star, fp.y_star});
    CHECK(std::abs(map.params.q1 * s - fp.x_star) <= 2e-12);
    CHECK(std::abs(map.params.q2 * (1 - s) - fp.y_star) <= 2e-12);
    const double bound = fp.margin > 0 ? std::ceil(std::log(1e-12) / std::log(fp.margin)) + 5 : 5;
    CHECK(static_cast<double>(fp.iterations) <= bound);
    for (int trial = 0; trial < 10; ++trial) {
      FixedPointOptions opts;
      opts.has_start = true;
      double x = unit(gen), y = unit(gen);
      if (x + y > 1) x = 1 - x, y = 1 - y;
      opts.start = {x, y};
      const auto other = solve_fixed_point(map, opts);
      CHECK(std::abs(other.x_star - fp.x_star) <= 10 * opts.tol);
      CHECK(std::abs(other.y_star - fp.y_star) <= 10 * opts.tol);
    }
  }
}
