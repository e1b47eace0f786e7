#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "urnlab/error.hpp"
#include "urnlab/operators.hpp"

namespace urnlab {

struct FixedPointReport {
  double x_star = 0.0;
  double y_star = 0.0;
  double z_star = 0.0;
  double alpha_star = 0.0;
  double beta_star = 0.0;
  double kappa = 0.0;
  double rho = 1.0;
  double residual = 0.0;
  std::int64_t iterations = 0;
  MapKind map_kind = MapKind::Direct;
  double q1 = 0.5;
  double q2 = 0.5;
  /// Grid contraction margin; below 1 means the contraction hypothesis holds
  /// on the grid.
  double margin = 0.0;
  bool linearized = false;
  std::vector<std::string> caveats;
};

struct FixedPointOptions {
  double tol = 1e-12;
  std::int64_t max_iter = 10000;
  /// Starting point; (q1/2, q2/2) when unset.
  bool has_start = false;
  SimplexPoint start;
  /// Grid resolution of the contraction margin.
  int margin_resolution = 100;
};

/// Thrown when the iteration does not settle; carries the last iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, SimplexPoint last)
      : Error(ErrorCode::Convergence, message), last_(last) {}
  SimplexPoint last() const { return last_; }

 private:
  SimplexPoint last_;
};

/// (q1 + q2) times the larger of the grid sups of |dS/dx| and |dS/dy| over
/// {(i/res, j/res)}. Infinite when the map has no gradient.
double contraction_margin(const SelectionMap& map, int resolution = 100);

/// Iterates (x, y) -> (q1 S, q2 (1 - S)) until the sup-norm step is below tol.
FixedPointReport solve_fixed_point(const SelectionMap& map, const FixedPointOptions& opts = {});

/// Fills the gradient at the root and the derived scalars.
void local_linearization(FixedPointReport& report, const SelectionMap& map);

/// solve_fixed_point followed by local_linearization.
FixedPointReport analyze_fixed_point(const SelectionMap& map, const FixedPointOptions& opts = {});

}  // namespace urnlab
