#include "urnlab/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "urnlab/descriptor.hpp"

namespace urnlab {

double contraction_margin(const SelectionMap& map, int resolution) {
  if (resolution < 1) raise(ErrorCode::InvalidArgument, "margin resolution must be positive");
  if (map.kind == MapKind::Direct && map.spec->smoothness().level == Smoothness::Holder)
    return std::numeric_limits<double>::infinity();
  double sup_dx = 0.0;
  double sup_dy = 0.0;
  const double res = resolution;
  for (int i = 0; i <= resolution; ++i)
    for (int j = 0; i + j <= resolution; ++j) {
      const Gradient gr = map.gradient({i / res, j / res});
      sup_dx = std::max(sup_dx, std::abs(gr.dx));
      sup_dy = std::max(sup_dy, std::abs(gr.dy));
    }
  return (map.params.q1 + map.params.q2) * std::max(sup_dx, sup_dy);
}

FixedPointReport solve_fixed_point(const SelectionMap& map, const FixedPointOptions& opts) {
  if (!(opts.tol > 0.0) || opts.max_iter < 1)
    raise(ErrorCode::InvalidArgument, "tolerance and iteration cap must be positive");
  const double q1 = map.params.q1;
  const double q2 = map.params.q2;
  FixedPointReport rep;
  rep.map_kind = map.kind;
  rep.q1 = q1;
  rep.q2 = q2;
  rep.margin = contraction_margin(map, opts.margin_resolution);
  if (!(rep.margin < 1.0))
    rep.caveats.push_back("contraction margin " + format_number(rep.margin) +
                          " >= 1 on the grid; uniqueness of the root is not certified");
  else
    rep.caveats.push_back("contraction margin " + format_number(rep.margin) +
                          " is a grid estimate, not a proof");

  SimplexPoint cur = opts.has_start ? opts.start : SimplexPoint{q1 / 2, q2 / 2};
  auto apply = [&](SimplexPoint pt) {
    const double s = map.value(pt);
    return SimplexPoint{q1 * s, q2 * (1.0 - s)};
  };
  for (std::int64_t it = 1; it <= opts.max_iter; ++it) {
    const SimplexPoint next = apply(cur);
    const double step = std::max(std::abs(next.x - cur.x), std::abs(next.y - cur.y));
    cur = next;
    if (step < opts.tol) {
      rep.iterations = it;
      const SimplexPoint again = apply(cur);
      rep.residual = std::max(std::abs(again.x - cur.x), std::abs(again.y - cur.y));
      rep.x_star = cur.x;
      rep.y_star = cur.y;
      rep.z_star = (1.0 - q1) * cur.x / q1;
      return rep;
    }
  }
  throw ConvergenceError("no fixed point within " + std::to_string(opts.max_iter) +
                             " iterations; last iterate (" + format_number(cur.x) + ", " +
                             format_number(cur.y) + ")",
                         cur);
}

void local_linearization(FixedPointReport& report, const SelectionMap& map) {
  const Gradient gr = map.gradient({report.x_star, report.y_star});
  report.alpha_star = gr.dx;
  report.beta_star = gr.dy;
  report.kappa = report.q1 * gr.dx - report.q2 * gr.dy;
  report.rho = std::min(1.0, 1.0 - report.kappa);
  report.z_star = (1.0 - report.q1) * report.x_star / report.q1;
  report.linearized = true;
}

FixedPointReport analyze_fixed_point(const SelectionMap& map, const FixedPointOptions& opts) {
  FixedPointReport rep = solve_fixed_point(map, opts);
  local_linearization(rep, map);
  return rep;
}

}  // namespace urnlab
