#include "urnlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "urnlab/descriptor.hpp"

namespace urnlab {

SlopeFit fit_log_log(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) raise(ErrorCode::InvalidArgument, "slope fit needs paired samples");
  if (xs.size() < 4) raise(ErrorCode::InvalidArgument, "slope fit needs at least 4 points");
  const std::size_t m = xs.size();
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      raise(ErrorCode::Domain, "slope fit needs positive values");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) raise(ErrorCode::Domain, "slope fit needs distinct x values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ly[i] - fit.intercept - fit.slope * lx[i];
    rss += r * r;
  }
  fit.slope_stderr = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
  return fit;
}

bool all_pass(const std::vector<Verdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::vector<Verdict> strong_law_check(const EnsembleStats& stats, const FixedPointReport& fp, double tol) {
  if (stats.checkpoints.empty()) raise(ErrorCode::InvalidArgument, "ensemble has no checkpoints");
  const CheckpointStats& last = stats.checkpoints.back();
  const double theory[3] = {fp.x_star, fp.y_star, fp.z_star};
  const char* names[3] = {"mean a/n", "mean b/n", "mean c/n"};
  std::vector<Verdict> out;
  for (int i = 0; i < 3; ++i) {
    Verdict v{"strong-law", names[i], last.mean[i], theory[i], tol, false};
    v.pass = std::abs(v.empirical - v.theory) <= tol;
    out.push_back(v);
  }
  return out;
}

Vector3 principal_direction(const Matrix3& m) {
  const Eigen::SelfAdjointEigenSolver<Matrix3> solver(m);
  return solver.eigenvectors().col(2).normalized();
}

std::vector<Verdict> clt_check(const EnsembleStats& stats, const AsymptoticsReport& report,
                               const CltOptions& opts) {
  if (stats.checkpoints.empty()) raise(ErrorCode::InvalidArgument, "ensemble has no checkpoints");
  if (!stats.centered_on_theory || stats.scaling.scaling != report.scaling)
    raise(ErrorCode::Case, std::string("ensemble deviations are not scaled by ") + to_string(report.scaling));
  const CheckpointStats& last = stats.checkpoints.back();
  std::vector<Verdict> out;
  if (report.regime == Regime::Superdiffusive) {
    if (stats.checkpoints.size() < 2)
      raise(ErrorCode::Case, "the variance-ratio test needs two checkpoints");
    const CheckpointStats& prev = stats.checkpoints[stats.checkpoints.size() - 2];
    Verdict ratio{"clt-superdiffusive", "variance ratio of scaled a/n deviation, n=" +
                                            std::to_string(last.n) + " vs n=" + std::to_string(prev.n),
                  last.deviation_cov(0, 0) / prev.deviation_cov(0, 0), 1.0, 0.0, false};
    ratio.tolerance = opts.ratio_high;
    ratio.pass = ratio.empirical >= opts.ratio_low && ratio.empirical <= opts.ratio_high;
    out.push_back(ratio);
    const Vector3 dir = *report.direction;
    Verdict align{"clt-superdiffusive", "|cosine| of leading deviation direction",
                  std::abs(principal_direction(last.deviation_cov).dot(dir.normalized())), 1.0,
                  opts.min_direction_cosine, false};
    align.pass = align.empirical >= opts.min_direction_cosine;
    out.push_back(align);
    return out;
  }
  if (!report.sigma) raise(ErrorCode::Case, "regime has no limiting covariance");
  const Matrix3& sigma = *report.sigma;
  const char* axis[3] = {"a", "b", "c"};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Verdict v{std::string("clt-") + to_string(report.regime),
                std::string("cov(") + axis[i] + "," + axis[j] + ")", last.deviation_cov(i, j),
                sigma(i, j), opts.tol_rel * std::max(std::abs(sigma(i, j)), opts.floor), false};
      v.pass = std::abs(v.empirical - v.theory) <= v.tolerance;
      out.push_back(v);
    }
  return out;
}

BoundCheck check_bernstein_bounds(const ReinforcementSpec& spec, const ModelParams& params,
                                  const SampleSizeLaw& law, std::int64_t n, double budget) {
  BoundCheck out;
  out.n = n;
  for (GapLemma l : applicable_lemmas(spec)) out.bounds.push_back(bernstein_gap_bound(spec, params, law, n, l));
  OperatorOptions opts;
  opts.max_cost = std::numeric_limits<double>::infinity();

  const double terms = std::max(1.0, evaluation_terms(law, n));
  const double points = std::max(3.0, budget / terms);
  out.resolution = static_cast<int>(std::clamp(std::floor(std::sqrt(2.0 * points)) - 1.0, 1.0, 200.0));
  out.hn = grid_sup_hn_gap(spec, params, law, n, out.resolution, opts);

  if (law.max_size(n) <= n) {
    const double lattice = static_cast<double>(n + 1) * static_cast<double>(n + 2) / 2.0;
    out.stride = lattice <= points ? 1
                                   : static_cast<std::int64_t>(std::ceil(static_cast<double>(n) /
                                                                         std::sqrt(2.0 * points)));
    out.en = lattice_sup_en_gap(spec, params, law, n, out.stride, opts);
    out.en_checked = true;
  }
  for (const GapBound& b : out.bounds) {
    if (!(out.hn.sup <= b.bound + kGapRounding)) ++out.violations;
    if (out.en_checked && !(out.en.sup <= b.bound + kGapRounding)) ++out.violations;
  }
  return out;
}

}  // namespace urnlab
