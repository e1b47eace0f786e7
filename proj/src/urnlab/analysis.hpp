#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "urnlab/asymptotics.hpp"
#include "urnlab/operators.hpp"
#include "urnlab/simulator.hpp"

namespace urnlab {

struct SlopeFit {
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
};

/// Least-squares slope of log y on log x. Needs at least 4 points, all
/// positive.
SlopeFit fit_log_log(const std::vector<double>& xs, const std::vector<double>& ys);

/// One comparison of an empirical quantity with its theoretical value.
struct Verdict {
  std::string rule;      // acceptance rule the comparison belongs to
  std::string quantity;  // what was compared
  double empirical = 0.0;
  double theory = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

bool all_pass(const std::vector<Verdict>& verdicts);

/// |mean - (x*, y*, z*)| <= tol for each proportion at the final checkpoint.
std::vector<Verdict> strong_law_check(const EnsembleStats& stats, const FixedPointReport& fp,
                                      double tol = 0.01);

struct CltOptions {
  double tol_rel = 0.15;
  double floor = 0.01;
  double ratio_low = 0.5;
  double ratio_high = 2.0;
  double min_direction_cosine = 0.95;
};

/// Gaussian regimes: entrywise |emp - sigma| <= tol_rel * max(|sigma|, floor)
/// for the deviation covariance at the final checkpoint. Superdiffusive
/// regime: variance ratio of the first coordinate across the last two
/// checkpoints, and alignment of the leading empirical direction.
std::vector<Verdict> clt_check(const EnsembleStats& stats, const AsymptoticsReport& report,
                               const CltOptions& opts = {});

/// Unit eigenvector of the largest eigenvalue of a symmetric matrix.
Vector3 principal_direction(const Matrix3& m);

/// Grid and lattice sups of the Bernstein gaps against every applicable
/// certified bound at one epoch.
struct BoundCheck {
  std::int64_t n = 0;
  SupResult hn;
  SupResult en;
  bool en_checked = false;
  int resolution = 0;
  std::int64_t stride = 1;
  std::vector<GapBound> bounds;
  std::int64_t violations = 0;
};

/// Rounding allowance on measured gaps. Sums that reproduce an affine g
/// exactly in real arithmetic still leave residues near 1e-16, while the
/// certified bound for such g is 0.
inline constexpr double kGapRounding = 1e-14;

/// `budget` caps the number of summed terms per sup search; the grid
/// resolution (at most 200) and lattice stride are chosen to fit it.
BoundCheck check_bernstein_bounds(const ReinforcementSpec& spec, const ModelParams& params,
                                  const SampleSizeLaw& law, std::int64_t n, double budget = 1e9);

}  // namespace urnlab
