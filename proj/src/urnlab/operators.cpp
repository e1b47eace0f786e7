#include "urnlab/operators.hpp"

#include <algorithm>
#include <cmath>

#include "urnlab/descriptor.hpp"
#include "urnlab/error.hpp"

namespace urnlab {

namespace {

// Terms smaller than this fraction of the modal term are not summed.
constexpr double kWindowCutoff = 1e-17;

// Walks outward from the mode with the ratio recurrence and normalizes.
// `up(i)` is P(i+1)/P(i). Returns the first index of the window.
template <class Up>
std::int64_t fill_window(std::int64_t lo_support, std::int64_t hi_support, std::int64_t mode,
                         Up up, std::vector<double>& w) {
  thread_local std::vector<double> below;
  below.clear();
  double v = 1.0;
  std::int64_t i = mode;
  while (i > lo_support) {
    const double r = up(i - 1);
    if (r <= 0.0) break;
    v /= r;
    if (v < kWindowCutoff) break;
    --i;
    below.push_back(v);
  }
  const std::int64_t lo = i;
  w.assign(below.rbegin(), below.rend());
  w.push_back(1.0);
  v = 1.0;
  for (i = mode; i < hi_support; ++i) {
    v *= up(i);
    if (v < kWindowCutoff) break;
    w.push_back(v);
  }
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return lo;
}

// Normalized Binomial(m, p) weights.
std::int64_t binomial_window(std::int64_t m, double p, std::vector<double>& w) {
  if (m == 0 || p <= 0.0) {
    w.assign(1, 1.0);
    return 0;
  }
  if (p >= 1.0) {
    w.assign(1, 1.0);
    return m;
  }
  const double odds = p / (1.0 - p);
  const std::int64_t mode = std::min<std::int64_t>(m, static_cast<std::int64_t>(std::floor(static_cast<double>(m + 1) * p)));
  return fill_window(0, m, mode,
                     [&](std::int64_t i) {
                       return static_cast<double>(m - i) / static_cast<double>(i + 1) * odds;
                     },
                     w);
}

// Normalized Hypergeometric weights: successes in `draws` from `pop` items of
// which `good` are successes.
std::int64_t hypergeometric_window(std::int64_t pop, std::int64_t good, std::int64_t draws,
                                   std::vector<double>& w) {
  const std::int64_t lo = std::max<std::int64_t>(0, draws - (pop - good));
  const std::int64_t hi = std::min(draws, good);
  if (lo == hi) {
    w.assign(1, 1.0);
    return lo;
  }
  const std::int64_t mode = std::clamp<std::int64_t>(
      static_cast<std::int64_t>(std::floor(static_cast<double>(draws + 1) *
                                           static_cast<double>(good + 1) /
                                           static_cast<double>(pop + 2))),
      lo, hi);
  return fill_window(lo, hi, mode,
                     [&](std::int64_t i) {
                       return static_cast<double>(good - i) * static_cast<double>(draws - i) /
                              (static_cast<double>(i + 1) *
                               static_cast<double>(pop - good - draws + i + 1));
                     },
                     w);
}

// Sum over i + j <= k of trinomial(k; x, y)(i, j) * term(i, j).
template <class Term>
double trinomial_sum(std::int64_t k, double x, double y, const Term& term) {
  thread_local std::vector<double> wi;
  thread_local std::vector<double> wj;
  const std::int64_t lo_i = binomial_window(k, x, wi);
  const double rest = 1.0 - x;
  const double py = rest > 0.0 ? std::clamp(y / rest, 0.0, 1.0) : 0.0;
  double total = 0.0;
  for (std::size_t a = 0; a < wi.size(); ++a) {
    const std::int64_t i = lo_i + static_cast<std::int64_t>(a);
    const std::int64_t lo_j = binomial_window(k - i, py, wj);
    double inner = 0.0;
    for (std::size_t b = 0; b < wj.size(); ++b) inner += wj[b] * term(i, lo_j + static_cast<std::int64_t>(b));
    total += wi[a] * inner;
  }
  return total;
}

// Same sum with multivariate hypergeometric weights for k draws from n balls
// with r1 of colour one and r2 of colour two.
template <class Term>
double hypergeometric_sum(std::int64_t n, std::int64_t r1, std::int64_t r2, std::int64_t k,
                          const Term& term) {
  thread_local std::vector<double> wi;
  thread_local std::vector<double> wj;
  const std::int64_t lo_i = hypergeometric_window(n, r1, k, wi);
  double total = 0.0;
  for (std::size_t a = 0; a < wi.size(); ++a) {
    const std::int64_t i = lo_i + static_cast<std::int64_t>(a);
    const std::int64_t lo_j = hypergeometric_window(n - r1, r2, k - i, wj);
    double inner = 0.0;
    for (std::size_t b = 0; b < wj.size(); ++b) inner += wj[b] * term(i, lo_j + static_cast<std::int64_t>(b));
    total += wi[a] * inner;
  }
  return total;
}

SimplexPoint checked_point(SimplexPoint pt) {
  if (!std::isfinite(pt.x) || !std::isfinite(pt.y) || !in_simplex(pt))
    raise(ErrorCode::Domain, "point (" + format_number(pt.x) + ", " + format_number(pt.y) +
                                 ") is outside the simplex");
  pt.x = std::clamp(pt.x, 0.0, 1.0);
  pt.y = std::clamp(pt.y, 0.0, 1.0 - pt.x);
  return pt;
}

void check_lattice(const LatticePoint& lp) {
  if (lp.n < 1 || lp.r1 < 0 || lp.r2 < 0 || lp.r1 + lp.r2 > lp.n)
    raise(ErrorCode::Domain, "lattice point needs r1, r2 >= 0 and r1 + r2 <= n");
}

void check_mu(SizeMassSpan mu) {
  if (mu.empty()) raise(ErrorCode::InvalidArgument, "sample-size masses are empty");
  double total = 0.0;
  for (double m : mu) {
    if (!(m >= 0.0)) raise(ErrorCode::InvalidArgument, "sample-size masses must be non-negative");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12)
    raise(ErrorCode::InvalidArgument, "sample-size masses sum to " + format_number(total));
}

void check_cost(std::int64_t first_k, std::int64_t last_k, double cap) {
  double cost = 0.0;
  for (std::int64_t k = first_k; k <= last_k; ++k) cost += static_cast<double>(k) * static_cast<double>(k);
  if (cost > cap)
    raise(ErrorCode::CostGuard, "exact summation over sizes " + std::to_string(first_k) + ".." +
                                    std::to_string(last_k) + " costs " + format_number(cost) +
                                    " > cap " + format_number(cap));
}

struct GFunction {
  const ReinforcementSpec& spec;
  double p;
  double operator()(double u, double v) const { return selection_probability(p, spec.f(u, v)); }
};

double binomial_expectation(const GFunction& g, std::int64_t k, SimplexPoint pt) {
  const double kd = static_cast<double>(k);
  return trinomial_sum(k, pt.x, pt.y, [&](std::int64_t i, std::int64_t j) {
    return g(static_cast<double>(i) / kd, static_cast<double>(j) / kd);
  });
}

double hypergeometric_expectation(const GFunction& g, std::int64_t k, const LatticePoint& lp) {
  const double kd = static_cast<double>(k);
  return hypergeometric_sum(lp.n, lp.r1, lp.r2, k, [&](std::int64_t i, std::int64_t j) {
    return g(static_cast<double>(i) / kd, static_cast<double>(j) / kd);
  });
}

}  // namespace

double h0_eval(const ReinforcementSpec& spec, const ModelParams& params, SizeMassSpan mu,
               SimplexPoint pt, const OperatorOptions& opts) {
  check_mu(mu);
  const auto m = static_cast<std::int64_t>(mu.size());
  if (m > opts.max_fixed_support)
    raise(ErrorCode::CostGuard, "fixed law support " + std::to_string(m) + " exceeds cap " +
                                    std::to_string(opts.max_fixed_support));
  pt = checked_point(pt);
  const GFunction g{spec, params.p};
  double total = 0.0;
  for (std::int64_t k = 1; k <= m; ++k) {
    const double w = mu[static_cast<std::size_t>(k - 1)];
    if (w > 0.0) total += w * binomial_expectation(g, k, pt);
  }
  return total;
}

namespace {

// Sum of mass * E[g(V/k) - offset] over the epoch-n law, tails at g(pt).
double hn_sum(const ReinforcementSpec& spec, const ModelParams& params, const SampleSizeLaw& law,
              std::int64_t n, SimplexPoint pt, const OperatorOptions& opts, bool centered) {
  const SizeMasses sm = law.masses(n);
  check_cost(sm.first_k, sm.last_k(), opts.max_cost);
  pt = checked_point(pt);
  const GFunction g{spec, params.p};
  const double at = g(pt.x, pt.y);
  const double offset = centered ? at : 0.0;
  double total = 0.0;
  for (std::size_t a = 0; a < sm.mass.size(); ++a) {
    if (sm.mass[a] == 0.0) continue;
    const std::int64_t k = sm.first_k + static_cast<std::int64_t>(a);
    const double kd = static_cast<double>(k);
    total += sm.mass[a] * trinomial_sum(k, pt.x, pt.y, [&](std::int64_t i, std::int64_t j) {
      return g(static_cast<double>(i) / kd, static_cast<double>(j) / kd) - offset;
    });
  }
  return total + sm.dropped * (at - offset);
}

double en_sum(const ReinforcementSpec& spec, const ModelParams& params, const SampleSizeLaw& law,
              LatticePoint lp, const OperatorOptions& opts, bool centered) {
  check_lattice(lp);
  const SizeMasses sm = law.masses(lp.n);
  if (sm.last_k() > lp.n)
    raise(ErrorCode::SampleSize, "law support " + std::to_string(sm.last_k()) +
                                     " exceeds n = " + std::to_string(lp.n) +
                                     " without replacement");
  check_cost(sm.first_k, sm.last_k(), opts.max_cost);
  const GFunction g{spec, params.p};
  const double nd = static_cast<double>(lp.n);
  const double at = g(static_cast<double>(lp.r1) / nd, static_cast<double>(lp.r2) / nd);
  const double offset = centered ? at : 0.0;
  double total = 0.0;
  for (std::size_t a = 0; a < sm.mass.size(); ++a) {
    if (sm.mass[a] == 0.0) continue;
    const std::int64_t k = sm.first_k + static_cast<std::int64_t>(a);
    const double kd = static_cast<double>(k);
    total += sm.mass[a] * hypergeometric_sum(lp.n, lp.r1, lp.r2, k, [&](std::int64_t i, std::int64_t j) {
      return g(static_cast<double>(i) / kd, static_cast<double>(j) / kd) - offset;
    });
  }
  return total + sm.dropped * (at - offset);
}

}  // namespace

double hn_eval(const ReinforcementSpec& spec, const ModelParams& params, const SampleSizeLaw& law,
               std::int64_t n, SimplexPoint pt, const OperatorOptions& opts) {
  return hn_sum(spec, params, law, n, pt, opts, false);
}

double hn_gap(const ReinforcementSpec& spec, const ModelParams& params, const SampleSizeLaw& law,
              std::int64_t n, SimplexPoint pt, const OperatorOptions& opts) {
  return hn_sum(spec, params, law, n, pt, opts, true);
}

double fn_eval(const ReinforcementSpec& spec, const ModelParams& params, SizeMassSpan mu,
               LatticePoint lp, const OperatorOptions& opts) {
  check_mu(mu);
  check_lattice(lp);
  const auto m = static_cast<std::int64_t>(mu.size());
  if (m > lp.n)
    raise(ErrorCode::SampleSize, "law support " + std::to_string(m) + " exceeds n = " +
                                     std::to_string(lp.n) + " without replacement");
  check_cost(1, m, opts.max_cost);
  const GFunction g{spec, params.p};
  double total = 0.0;
  for (std::int64_t k = 1; k <= m; ++k) {
    const double w = mu[static_cast<std::size_t>(k - 1)];
    if (w > 0.0) total += w * hypergeometric_expectation(g, k, lp);
  }
  return total;
}

double en_eval(const ReinforcementSpec& spec, const ModelParams& params, const SampleSizeLaw& law,
               LatticePoint lp, const OperatorOptions& opts) {
  return en_sum(spec, params, law, lp, opts, false);
}

double en_gap(const ReinforcementSpec& spec, const ModelParams& params, const SampleSizeLaw& law,
              LatticePoint lp, const OperatorOptions& opts) {
  return en_sum(spec, params, law, lp, opts, true);
}

Gradient h0_gradient(const ReinforcementSpec& spec, const ModelParams& params, SizeMassSpan mu,
                     SimplexPoint pt, const OperatorOptions& opts) {
  check_mu(mu);
  pt = checked_point(pt);
  const auto m = static_cast<std::int64_t>(mu.size());
  if (m > 20) {
    return numeric_gradient(
        [&](double x, double y) { return h0_eval(spec, params, mu, {x, y}, opts); }, pt);
  }
  // d/dx of the degree-k Bernstein sum is k times the degree-(k-1) sum of
  // forward differences in the first index; likewise for y.
  const GFunction g{spec, params.p};
  Gradient out;
  for (std::int64_t k = 1; k <= m; ++k) {
    const double w = mu[static_cast<std::size_t>(k - 1)];
    if (w == 0.0) continue;
    const double kd = static_cast<double>(k);
    auto gij = [&](std::int64_t i, std::int64_t j) {
      return g(static_cast<double>(i) / kd, static_cast<double>(j) / kd);
    };
    out.dx += w * kd * trinomial_sum(k - 1, pt.x, pt.y, [&](std::int64_t i, std::int64_t j) {
      return gij(i + 1, j) - gij(i, j);
    });
    out.dy += w * kd * trinomial_sum(k - 1, pt.x, pt.y, [&](std::int64_t i, std::int64_t j) {
      return gij(i, j + 1) - gij(i, j);
    });
  }
  return out;
}

const char* to_string(MapKind k) noexcept { return k == MapKind::Smoothed ? "smoothed" : "direct"; }

MapKind map_kind_for(const SampleSizeLaw& law) {
  return law.scenario() == Scenario::FixedLaw ? MapKind::Smoothed : MapKind::Direct;
}

SelectionMap::SelectionMap(MapKind kind, const ReinforcementSpec& spec, const ModelParams& params,
                           std::vector<double> mu, OperatorOptions opts)
    : kind(kind), spec(&spec), params(params), mu(std::move(mu)), opts(opts) {
  params.validate();
  if (kind == MapKind::Smoothed) check_mu(this->mu);
}

SelectionMap SelectionMap::for_law(const ReinforcementSpec& spec, const ModelParams& params,
                                   const SampleSizeLaw& law, OperatorOptions opts) {
  const MapKind kind = map_kind_for(law);
  return SelectionMap(kind, spec, params, kind == MapKind::Smoothed ? law.fixed_masses() : std::vector<double>{}, opts);
}

double SelectionMap::value(SimplexPoint pt) const {
  return kind == MapKind::Smoothed ? h0_eval(*spec, params, mu, pt, opts) : eval_g(*spec, params, pt);
}

Gradient SelectionMap::gradient(SimplexPoint pt) const {
  return kind == MapKind::Smoothed ? h0_gradient(*spec, params, mu, pt, opts)
                                   : grad_g(*spec, params, pt);
}

std::array<double, 2> drift(const SelectionMap& map, SimplexPoint pt) {
  const double s = map.value(pt);
  return {map.params.q1 * s - pt.x, map.params.q2 * (1.0 - s) - pt.y};
}

std::array<double, 3> drift(const SelectionMap& map, const std::array<double, 3>& point) {
  const auto [x, y, z] = point;
  constexpr double tol = 1e-12;
  if (!(x >= -tol && y >= -tol && z >= -tol && x + y + z <= 1.0 + tol))
    raise(ErrorCode::Domain, "point outside x, y, z >= 0, x + y + z <= 1");
  const double s = map.value({x, y});
  return {map.params.q1 * s - x, map.params.q2 * (1.0 - s) - y, (1.0 - map.params.q1) * s - z};
}

const char* to_string(GapLemma l) noexcept {
  switch (l) {
    case GapLemma::Holder: return "holder";
    case GapLemma::Modulus: return "gradient-modulus";
    case GapLemma::Hessian: return "hessian";
    case GapLemma::Hypergeometric: return "hypergeometric";
  }
  return "unknown";
}

std::vector<GapLemma> applicable_lemmas(const ReinforcementSpec& spec) {
  std::vector<GapLemma> out{GapLemma::Holder};
  const auto& sm = spec.smoothness();
  if (sm.level == Smoothness::C2 || (sm.level == Smoothness::C1 && sm.gradient_modulus))
    out.push_back(GapLemma::Modulus);
  if (sm.level == Smoothness::C2) out.push_back(GapLemma::Hessian);
  return out;
}

GapBound bernstein_gap_bound(const ReinforcementSpec& spec, const ModelParams& params,
                             const SampleSizeLaw& law, std::int64_t n, GapLemma lemma) {
  GapBound out{n, 0.0, lemma};
  const auto& sm = spec.smoothness();
  switch (lemma) {
    case GapLemma::Holder: {
      const double a = sm.holder_exponent;
      out.bound = std::pow(2.0, -a / 2.0) * holder_constant_g(spec, params) *
                  law.inverse_moment(n, a / 2.0);
      return out;
    }
    case GapLemma::Modulus: {
      if (sm.level == Smoothness::Holder)
        raise(ErrorCode::Capability, spec.name() + " has no gradient; the modulus bound needs C1");
      const double e1 = law.inverse_moment(n, 1.0);
      const double eh = law.inverse_moment(n, 0.5);
      const double c = 1.0 / std::sqrt(2.0) + 0.5;
      const double first = modulus_bound(spec, params, std::sqrt(e1)) * std::sqrt(e1);
      const double second = modulus_bound(spec, params, e1 / eh) * eh;
      out.bound = c * std::min(first, second);
      return out;
    }
    case GapLemma::Hessian: {
      if (sm.level != Smoothness::C2)
        raise(ErrorCode::Capability, spec.name() + " is not C2; the Hessian bound does not apply");
      out.bound = 0.75 * hessian_bounds_g(spec, params).max() * law.inverse_moment(n, 1.0);
      return out;
    }
    case GapLemma::Hypergeometric:
      raise(ErrorCode::InvalidArgument, "the hypergeometric gap has no closed bound; use hypergeom_gap");
  }
  return out;
}

SupResult hypergeom_gap(const ReinforcementSpec& spec, const ModelParams& params, SizeMassSpan mu,
                        std::int64_t n, const OperatorOptions& opts) {
  check_mu(mu);
  if (static_cast<std::int64_t>(mu.size()) > n)
    raise(ErrorCode::SampleSize, "law support exceeds n");
  SupResult out;
  const std::int64_t stride = n <= 1000 ? 1 : (n + 999) / 1000;
  out.approximate = stride > 1;
  const double nd = static_cast<double>(n);
  auto visit = [&](std::int64_t r1, std::int64_t r2) {
    const double h = h0_eval(spec, params, mu, {static_cast<double>(r1) / nd, static_cast<double>(r2) / nd}, opts);
    const double f = fn_eval(spec, params, mu, {n, r1, r2}, opts);
    const double gap = std::abs(f - h);
    ++out.points;
    if (gap > out.sup) {
      out.sup = gap;
      out.x = static_cast<double>(r1) / nd;
      out.y = static_cast<double>(r2) / nd;
    }
  };
  for (std::int64_t r1 = 0; r1 <= n; r1 = (r1 == n ? n + 1 : std::min(n, r1 + stride)))
    for (std::int64_t r2 = 0; r2 <= n - r1; r2 = (r2 == n - r1 ? n + 1 : std::min(n - r1, r2 + stride)))
      visit(r1, r2);
  return out;
}

SupResult grid_sup_hn_gap(const ReinforcementSpec& spec, const ModelParams& params,
                          const SampleSizeLaw& law, std::int64_t n, int resolution,
                          const OperatorOptions& opts) {
  if (resolution < 1) raise(ErrorCode::InvalidArgument, "grid resolution must be positive");
  SupResult out;
  const double res = resolution;
  for (int i = 0; i <= resolution; ++i)
    for (int j = 0; i + j <= resolution; ++j) {
      const SimplexPoint pt{i / res, j / res};
      const double gap = std::abs(hn_gap(spec, params, law, n, pt, opts));
      ++out.points;
      if (gap > out.sup) {
        out.sup = gap;
        out.x = pt.x;
        out.y = pt.y;
      }
    }
  out.approximate = true;
  return out;
}

SupResult lattice_sup_en_gap(const ReinforcementSpec& spec, const ModelParams& params,
                             const SampleSizeLaw& law, std::int64_t n, std::int64_t stride,
                             const OperatorOptions& opts) {
  if (stride < 1) raise(ErrorCode::InvalidArgument, "stride must be positive");
  SupResult out;
  out.approximate = stride > 1;
  const double nd = static_cast<double>(n);
  for (std::int64_t r1 = 0; r1 <= n; r1 = (r1 == n ? n + 1 : std::min(n, r1 + stride)))
    for (std::int64_t r2 = 0; r2 <= n - r1; r2 = (r2 == n - r1 ? n + 1 : std::min(n - r1, r2 + stride))) {
      const SimplexPoint pt{static_cast<double>(r1) / nd, static_cast<double>(r2) / nd};
      const double gap = std::abs(en_gap(spec, params, law, {n, r1, r2}, opts));
      ++out.points;
      if (gap > out.sup) {
        out.sup = gap;
        out.x = pt.x;
        out.y = pt.y;
      }
    }
  return out;
}

double evaluation_terms(const SampleSizeLaw& law, std::int64_t n) {
  const SizeMasses sm = law.masses(n);
  double total = 0.0;
  for (std::int64_t k = sm.first_k; k <= sm.last_k(); ++k) {
    const double kd = static_cast<double>(k);
    total += std::min((kd + 1) * (kd + 2) / 2, 60 * kd + 1);
  }
  return total;
}

}  // namespace urnlab
