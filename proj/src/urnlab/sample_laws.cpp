#include "urnlab/sample_laws.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "urnlab/analysis.hpp"
#include "urnlab/descriptor.hpp"
#include "urnlab/error.hpp"

namespace urnlab {

namespace {

constexpr double kNegligible = 1e-20;

double lfact(double n) { return std::lgamma(n + 1.0); }

}  // namespace

const char* to_string(Scenario s) noexcept {
  return s == Scenario::FixedLaw ? "fixed-law" : "epoch-law";
}

const char* to_string(LawKind k) noexcept {
  switch (k) {
    case LawKind::Fixed: return "fixed";
    case LawKind::CustomPmf: return "custom-pmf";
    case LawKind::Uniform: return "uniform";
    case LawKind::TruncatedGeometric: return "geometric";
    case LawKind::ShiftedBinomial: return "binomial";
    case LawKind::TruncatedPoisson: return "poisson";
  }
  return "unknown";
}

SampleSizeLaw SampleSizeLaw::fixed(std::int64_t k) {
  if (k < 1) raise(ErrorCode::InvalidSize, "fixed sample size must be at least 1");
  SampleSizeLaw law;
  law.kind_ = LawKind::Fixed;
  law.k_ = k;
  return law;
}

SampleSizeLaw SampleSizeLaw::custom_pmf(std::vector<double> masses) {
  if (masses.empty()) raise(ErrorCode::InvalidArgument, "custom pmf needs at least one mass");
  double total = 0.0;
  for (double m : masses) {
    if (!(m >= 0.0)) raise(ErrorCode::InvalidArgument, "custom pmf masses must be non-negative");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12)
    raise(ErrorCode::InvalidArgument, "custom pmf masses sum to " + format_number(total));
  while (masses.size() > 1 && masses.back() == 0.0) masses.pop_back();
  SampleSizeLaw law;
  law.kind_ = LawKind::CustomPmf;
  law.pmf_ = std::move(masses);
  law.cdf_.resize(law.pmf_.size());
  std::partial_sum(law.pmf_.begin(), law.pmf_.end(), law.cdf_.begin());
  law.cdf_.back() = 1.0;
  return law;
}

SampleSizeLaw SampleSizeLaw::uniform() {
  SampleSizeLaw law;
  law.kind_ = LawKind::Uniform;
  return law;
}

namespace {

void check_family(double c, double alpha) {
  if (!(c > 0.0) || !std::isfinite(c)) raise(ErrorCode::InvalidArgument, "law constant c must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    raise(ErrorCode::InvalidArgument, "law exponent alpha must be non-negative");
}

}  // namespace

SampleSizeLaw SampleSizeLaw::truncated_geometric(double c, double alpha) {
  check_family(c, alpha);
  SampleSizeLaw law;
  law.kind_ = LawKind::TruncatedGeometric;
  law.c_ = c;
  law.alpha_ = alpha;
  return law;
}

SampleSizeLaw SampleSizeLaw::shifted_binomial(double c, double alpha) {
  check_family(c, alpha);
  SampleSizeLaw law;
  law.kind_ = LawKind::ShiftedBinomial;
  law.c_ = c;
  law.alpha_ = alpha;
  return law;
}

SampleSizeLaw SampleSizeLaw::truncated_poisson(double c, double alpha) {
  check_family(c, alpha);
  SampleSizeLaw law;
  law.kind_ = LawKind::TruncatedPoisson;
  law.c_ = c;
  law.alpha_ = alpha;
  return law;
}

SampleSizeLaw SampleSizeLaw::parse(std::string_view descriptor) {
  const DescriptorArgs args(descriptor);
  const std::string& kind = args.kind();
  if (kind == "fixed") {
    args.allow_only({"k"});
    const double k = args.number("k");
    if (k != std::floor(k)) raise(ErrorCode::InvalidArgument, "fixed size k must be an integer");
    return fixed(static_cast<std::int64_t>(k));
  }
  if (kind == "custom-pmf") {
    args.allow_only({"pmf"});
    return custom_pmf(args.numbers("pmf"));
  }
  if (kind == "uniform") {
    args.allow_only({});
    return uniform();
  }
  if (kind == "geometric") {
    args.allow_only({"c", "alpha"});
    return truncated_geometric(args.number("c", 1.0), args.number("alpha"));
  }
  if (kind == "binomial") {
    args.allow_only({"c", "alpha"});
    return shifted_binomial(args.number("c", 1.0), args.number("alpha"));
  }
  if (kind == "poisson") {
    args.allow_only({"c", "alpha"});
    return truncated_poisson(args.number("c", 1.0), args.number("alpha"));
  }
  raise(ErrorCode::InvalidArgument, "unknown sample-size law '" + kind + "'");
}

Scenario SampleSizeLaw::scenario() const {
  return kind_ == LawKind::Fixed || kind_ == LawKind::CustomPmf ? Scenario::FixedLaw : Scenario::EpochLaw;
}

std::string SampleSizeLaw::descriptor() const {
  switch (kind_) {
    case LawKind::Fixed: return "kind=fixed k=" + std::to_string(k_);
    case LawKind::CustomPmf: {
      std::string out = "kind=custom-pmf pmf=";
      for (std::size_t i = 0; i < pmf_.size(); ++i) out += (i ? "/" : "") + format_number(pmf_[i]);
      return out;
    }
    case LawKind::Uniform: return "kind=uniform";
    default:
      return std::string("kind=") + to_string(kind_) + " c=" + format_number(c_) +
             " alpha=" + format_number(alpha_);
  }
}

std::int64_t SampleSizeLaw::max_size(std::int64_t n) const {
  switch (kind_) {
    case LawKind::Fixed: return k_;
    case LawKind::CustomPmf: return static_cast<std::int64_t>(pmf_.size());
    default: return n;
  }
}

std::vector<double> SampleSizeLaw::fixed_masses() const {
  if (kind_ == LawKind::CustomPmf) return pmf_;
  if (kind_ == LawKind::Fixed) {
    std::vector<double> out(static_cast<std::size_t>(k_), 0.0);
    out.back() = 1.0;
    return out;
  }
  return {};
}

double SampleSizeLaw::rate(std::int64_t n) const {
  const double nd = static_cast<double>(n);
  switch (kind_) {
    case LawKind::TruncatedGeometric:
    case LawKind::ShiftedBinomial: return std::min(1.0, c_ * std::pow(nd, -alpha_));
    case LawKind::TruncatedPoisson: return c_ * std::pow(nd, alpha_);
    default: return 0.0;
  }
}

double SampleSizeLaw::pmf(std::int64_t n, std::int64_t k) const {
  if (n < 1) raise(ErrorCode::InvalidArgument, "epoch must be at least 1");
  if (k < 1) return 0.0;
  switch (kind_) {
    case LawKind::Fixed: return k == k_ ? 1.0 : 0.0;
    case LawKind::CustomPmf:
      return k <= static_cast<std::int64_t>(pmf_.size()) ? pmf_[static_cast<std::size_t>(k - 1)] : 0.0;
    case LawKind::Uniform: return k <= n ? 1.0 / static_cast<double>(n) : 0.0;
    case LawKind::TruncatedGeometric: {
      if (k > n) return 0.0;
      const double p = rate(n);
      if (p >= 1.0) return k == 1 ? 1.0 : 0.0;
      const double log_q = std::log1p(-p);
      if (k == n) return std::exp(static_cast<double>(n - 1) * log_q);
      return p * std::exp(static_cast<double>(k - 1) * log_q);
    }
    case LawKind::ShiftedBinomial: {
      if (k > n) return 0.0;
      const double p = rate(n);
      const std::int64_t j = k - 1;
      if (p >= 1.0) return j == n - 1 ? 1.0 : 0.0;
      const double t = static_cast<double>(n - 1);
      const double jd = static_cast<double>(j);
      return std::exp(lfact(t) - lfact(jd) - lfact(t - jd) + jd * std::log(p) +
                      (t - jd) * std::log1p(-p));
    }
    case LawKind::TruncatedPoisson: {
      if (k > n) return 0.0;
      const double lambda = rate(n);
      if (k == n) {
        // P(Poisson >= n - 1) is the regularized lower incomplete gamma P(n - 1, lambda).
        return n - 1 == 0 ? 1.0 : boost::math::gamma_p(static_cast<double>(n - 1), lambda);
      }
      const double j = static_cast<double>(k - 1);
      return std::exp(-lambda + j * std::log(lambda) - lfact(j));
    }
  }
  return 0.0;
}

SizeMasses SampleSizeLaw::masses(std::int64_t n) const {
  if (n < 1) raise(ErrorCode::InvalidArgument, "epoch must be at least 1");
  SizeMasses out;
  switch (kind_) {
    case LawKind::Fixed:
      out.first_k = k_;
      out.mass = {1.0};
      return out;
    case LawKind::CustomPmf:
      out.first_k = 1;
      out.mass = pmf_;
      return out;
    case LawKind::Uniform:
      out.first_k = 1;
      out.mass.assign(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
      return out;
    case LawKind::TruncatedGeometric: {
      const double p = rate(n);
      out.first_k = 1;
      if (p >= 1.0 || n == 1) {
        out.mass = {1.0};
        return out;
      }
      const double q = 1.0 - p;
      double tail = 1.0;  // P(K >= k)
      for (std::int64_t k = 1; k <= n; ++k) {
        if (k == n) {
          out.mass.push_back(tail);
          tail = 0.0;
          break;
        }
        if (tail < kNegligible) break;
        out.mass.push_back(tail * p);
        tail *= q;
      }
      out.dropped = tail;
      return out;
    }
    case LawKind::ShiftedBinomial: {
      const double p = rate(n);
      const std::int64_t trials = n - 1;
      if (p >= 1.0 || trials == 0) {
        out.first_k = trials + 1;
        out.mass = {1.0};
        return out;
      }
      const double ratio = p / (1.0 - p);
      const std::int64_t mode = std::min<std::int64_t>(trials, static_cast<std::int64_t>(std::floor(static_cast<double>(n) * p)));
      const double t = static_cast<double>(trials);
      const double md = static_cast<double>(mode);
      const double at_mode = std::exp(lfact(t) - lfact(md) - lfact(t - md) + md * std::log(p) +
                                      (t - md) * std::log1p(-p));
      std::vector<double> down;
      double w = at_mode;
      std::int64_t j = mode;
      while (j > 0) {
        w *= static_cast<double>(j) / (static_cast<double>(trials - j + 1) * ratio);
        if (w < kNegligible) break;
        --j;
        down.push_back(w);
      }
      const std::int64_t lo = mode - static_cast<std::int64_t>(down.size());
      out.first_k = lo + 1;
      out.mass.assign(down.rbegin(), down.rend());
      out.mass.push_back(at_mode);
      w = at_mode;
      for (j = mode; j < trials; ++j) {
        w *= static_cast<double>(trials - j) / static_cast<double>(j + 1) * ratio;
        if (w < kNegligible) break;
        out.mass.push_back(w);
      }
      break;
    }
    case LawKind::TruncatedPoisson: {
      const double lambda = rate(n);
      if (n == 1) {
        out.mass = {1.0};
        return out;
      }
      const double top_mass = pmf(n, n);
      // Poisson part lives on j = 0..n-2, i.e. k = j + 1 <= n - 1.
      const std::int64_t jmax = n - 2;
      const std::int64_t mode = std::min<std::int64_t>(jmax, static_cast<std::int64_t>(std::floor(lambda)));
      const double md = static_cast<double>(mode);
      const double at_mode = std::exp(-lambda + md * std::log(lambda) - lfact(md));
      std::vector<double> down;
      double w = at_mode;
      std::int64_t j = mode;
      while (j > 0) {
        w *= static_cast<double>(j) / lambda;
        if (w < kNegligible) break;
        --j;
        down.push_back(w);
      }
      out.first_k = mode - static_cast<std::int64_t>(down.size()) + 1;
      out.mass.assign(down.rbegin(), down.rend());
      out.mass.push_back(at_mode);
      w = at_mode;
      const bool keep_top = top_mass >= kNegligible;
      for (j = mode; j < jmax; ++j) {
        w *= lambda / static_cast<double>(j + 1);
        if (w < kNegligible && !keep_top) break;
        out.mass.push_back(w);
      }
      if (keep_top) out.mass.push_back(top_mass);
      break;
    }
  }
  const long double kept = std::accumulate(out.mass.begin(), out.mass.end(), 0.0L);
  out.dropped = std::max(0.0, static_cast<double>(1.0L - kept));
  return out;
}

std::int64_t SampleSizeLaw::sample(std::int64_t n, RandomSource& rng) const {
  switch (kind_) {
    case LawKind::Fixed: return k_;
    case LawKind::CustomPmf: {
      const double u = rng.uniform01();
      const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
      return std::min<std::int64_t>(static_cast<std::int64_t>(it - cdf_.begin()) + 1,
                                    static_cast<std::int64_t>(pmf_.size()));
    }
    case LawKind::Uniform: return rng.uniform_int(1, n);
    case LawKind::TruncatedGeometric: return std::min(n, rng.geometric(rate(n)));
    case LawKind::ShiftedBinomial: return 1 + rng.binomial(n - 1, rate(n));
    case LawKind::TruncatedPoisson: return std::min(n, 1 + rng.poisson(rate(n)));
  }
  return 1;
}

double SampleSizeLaw::raw_inverse_moment(std::int64_t n, double power) const {
  const SizeMasses m = masses(n);
  long double total = 0.0L;
  for (std::size_t i = 0; i < m.mass.size(); ++i) {
    const double k = static_cast<double>(m.first_k + static_cast<std::int64_t>(i));
    total += static_cast<long double>(m.mass[i]) * (power == 1.0 ? 1.0 / k : std::pow(k, -power));
  }
  return static_cast<double>(total);
}

double SampleSizeLaw::inverse_moment(std::int64_t n, double power) const {
  if (n < 1) raise(ErrorCode::InvalidArgument, "epoch must be at least 1");
  if (!(power > 0.0)) raise(ErrorCode::InvalidArgument, "inverse moment power must be positive");
  const double summed = raw_inverse_moment(n, power);
  if (kind_ == LawKind::ShiftedBinomial && power == 1.0) {
    const double p = rate(n);
    const double nd = static_cast<double>(n);
    const double closed = p >= 1.0 ? 1.0 / nd : -std::expm1(nd * std::log1p(-p)) / (nd * p);
    if (std::abs(closed - summed) > 1e-12)
      raise(ErrorCode::Internal, "binomial inverse moment closed form " + format_number(closed) +
                                     " disagrees with summation " + format_number(summed));
    return closed;
  }
  return summed;
}

bool SampleSizeLaw::hypotheses_met() const {
  switch (kind_) {
    case LawKind::TruncatedGeometric:
    case LawKind::TruncatedPoisson: return alpha_ > 0.5;
    case LawKind::ShiftedBinomial: return alpha_ > 0.0 && alpha_ < 0.5;
    default: return true;
  }
}

std::string SampleSizeLaw::hypotheses_note() const {
  switch (kind_) {
    case LawKind::Fixed:
    case LawKind::CustomPmf: return "fixed law on [M]; series criteria do not apply";
    case LawKind::Uniform: return "uniform on [n]: sum of E[1/K] grows like (log n)^2";
    case LawKind::TruncatedGeometric:
      return alpha_ > 0.5 ? "geometric with alpha > 1/2: sum of E[1/K] is O(n^(1-alpha) log n)"
                          : "geometric needs alpha > 1/2; growth hypotheses unmet";
    case LawKind::ShiftedBinomial:
      return hypotheses_met() ? "binomial with 0 < alpha < 1/2: sum of E[1/K] grows like n^alpha"
                              : "binomial needs 0 < alpha < 1/2; growth hypotheses unmet";
    case LawKind::TruncatedPoisson:
      return alpha_ > 0.5 ? "poisson with alpha > 1/2: sum of E[1/K] grows like n^(1-alpha)"
                          : "poisson needs alpha > 1/2; growth hypotheses unmet";
  }
  return "";
}

std::vector<CatalogLaw> law_catalog() {
  return {
      {"fixed", "kind=fixed k=5", "fixed law, point mass at k; needs k <= n without replacement"},
      {"custom-pmf", "kind=custom-pmf pmf=0.2/0.3/0.5", "fixed law, masses of sizes 1..M"},
      {"uniform", "kind=uniform", "epoch-indexed, uniform on {1..n}; E[1/K] = H_n / n"},
      {"geometric", "kind=geometric c=1 alpha=0.7",
       "epoch-indexed, min{n, Geometric(c n^-alpha)}; growth hypotheses need alpha > 1/2"},
      {"binomial", "kind=binomial c=1 alpha=0.3",
       "epoch-indexed, 1 + Binomial(n-1, c n^-alpha); growth hypotheses need 0 < alpha < 1/2"},
      {"poisson", "kind=poisson c=1 alpha=0.7",
       "epoch-indexed, min{n, 1 + Poisson(c n^alpha)}; growth hypotheses need alpha > 1/2"},
  };
}

InverseMomentTable inverse_moments(const SampleSizeLaw& law, std::int64_t n) {
  return {n, law.inverse_moment(n, 1.0), law.inverse_moment(n, 0.5)};
}

ConditionalMoments conditional_moments_with_replacement(double x, double y, std::int64_t k) {
  if (k < 1) raise(ErrorCode::InvalidSize, "sample size must be at least 1");
  if (!in_simplex({x, y})) raise(ErrorCode::Domain, "point outside the simplex");
  const double kd = static_cast<double>(k);
  return {x, x * (1.0 - x) / kd, y, y * (1.0 - y) / kd};
}

ConditionalMoments conditional_moments_without_replacement(std::int64_t n, std::int64_t r1,
                                                           std::int64_t r2, std::int64_t k) {
  if (k < 1) raise(ErrorCode::InvalidSize, "sample size must be at least 1");
  if (n < 1 || r1 < 0 || r2 < 0 || r1 + r2 > n)
    raise(ErrorCode::Domain, "counts must satisfy r1 + r2 <= n");
  if (k > n) raise(ErrorCode::SampleSize, "sample size exceeds urn size without replacement");
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  auto var = [&](std::int64_t r) {
    if (n == 1) return 0.0;
    const double rd = static_cast<double>(r);
    return rd * (nd - rd) * (nd - kd) / (kd * (nd - 1.0) * nd * nd);
  };
  return {static_cast<double>(r1) / nd, var(r1), static_cast<double>(r2) / nd, var(r2)};
}

const char* to_string(SeriesFlag f) noexcept {
  switch (f) {
    case SeriesFlag::ConvergentLooking: return "convergent-looking";
    case SeriesFlag::SqrtNOverLogN: return "o(sqrt(n/log n)) consistent";
    case SeriesFlag::SqrtN: return "o(sqrt(n)) consistent";
    case SeriesFlag::Inconsistent: return "inconsistent";
  }
  return "unknown";
}

const SeriesSummary& SeriesReport::get(const std::string& name) const {
  for (const auto& s : series)
    if (s.name == name) return s;
  raise(ErrorCode::InvalidArgument, "no series named '" + name + "'");
}

namespace {

std::vector<std::int64_t> geometric_checkpoints(std::int64_t start, std::int64_t horizon) {
  std::vector<std::int64_t> out;
  for (int e = 0;; ++e) {
    const auto c = static_cast<std::int64_t>(std::llround(std::pow(10.0, e / 8.0)));
    if (c >= horizon) break;
    if (c > start && (out.empty() || c > out.back())) out.push_back(c);
  }
  out.push_back(horizon);
  return out;
}

// Slope fit over the checkpoints in the last decade [horizon / 10, horizon].
double last_decade_slope(const std::vector<std::int64_t>& cps, const std::vector<double>& ys) {
  std::vector<double> xs_fit;
  std::vector<double> ys_fit;
  const double from = static_cast<double>(cps.back()) / 10.0;
  for (std::size_t i = 0; i < cps.size(); ++i)
    if (static_cast<double>(cps[i]) >= from * (1 - 1e-12) && ys[i] > 0.0) {
      xs_fit.push_back(static_cast<double>(cps[i]));
      ys_fit.push_back(ys[i]);
    }
  if (xs_fit.size() < 2) return 0.0;
  return fit_log_log(xs_fit, ys_fit).slope;
}

enum class Target { Convergent, SqrtNOverLogN, SqrtLogN, SqrtN };

SeriesSummary summarize(std::string name, Target target, const std::vector<std::int64_t>& cps,
                        std::vector<double> sums) {
  SeriesSummary s;
  s.name = std::move(name);
  std::vector<double> normalized(cps.size());
  std::vector<double> log_squared(cps.size());
  std::vector<double> increments(cps.size());
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const double n = static_cast<double>(cps[i]);
    normalized[i] = sums[i] / std::sqrt(n / std::log(n));
    log_squared[i] = sums[i] / (std::log(n) * std::log(n));
    increments[i] = i == 0 ? 0.0 : sums[i] - sums[i - 1];
  }
  // Increments between checkpoints of uneven spacing are rescaled to a
  // common log-width before fitting.
  std::vector<double> rate(cps.size(), 0.0);
  for (std::size_t i = 1; i < cps.size(); ++i) {
    const double width = std::log(static_cast<double>(cps[i]) / static_cast<double>(cps[i - 1]));
    rate[i] = width > 0 ? increments[i] / width : 0.0;
  }
  s.raw_slope = last_decade_slope(cps, sums);
  s.normalized_slope = last_decade_slope(cps, normalized);
  s.log_squared_slope = last_decade_slope(cps, log_squared);
  s.increment_slope = last_decade_slope(cps, rate);
  if (s.increment_slope <= -0.1) s.flag = SeriesFlag::ConvergentLooking;
  else if (s.normalized_slope <= -0.1) s.flag = SeriesFlag::SqrtNOverLogN;
  else if (s.raw_slope <= 0.4) s.flag = SeriesFlag::SqrtN;
  else s.flag = SeriesFlag::Inconsistent;
  switch (target) {
    case Target::Convergent:
      s.target = "converges";
      s.target_met = s.flag == SeriesFlag::ConvergentLooking;
      break;
    case Target::SqrtLogN:
      s.target = "o(sqrt(log n))";
      s.target_met = s.flag == SeriesFlag::ConvergentLooking;
      break;
    case Target::SqrtNOverLogN:
      s.target = "o(sqrt(n/log n))";
      s.target_met = s.flag == SeriesFlag::ConvergentLooking || s.flag == SeriesFlag::SqrtNOverLogN;
      break;
    case Target::SqrtN:
      s.target = "o(sqrt(n))";
      s.target_met = s.flag != SeriesFlag::Inconsistent;
      break;
  }
  s.partial_sums = std::move(sums);
  return s;
}

}  // namespace

SeriesReport series_report(const SampleSizeLaw& law, std::int64_t horizon, std::int64_t start,
                           const std::function<double(double)>& modulus) {
  if (horizon < 100) raise(ErrorCode::InvalidArgument, "series horizon must be at least 100");
  if (start < 1 || start >= horizon / 10)
    raise(ErrorCode::InvalidArgument, "series start must lie in [1, horizon / 10)");
  SeriesReport rep;
  rep.law = law.descriptor();
  rep.start = start;
  rep.horizon = horizon;
  rep.checkpoints = geometric_checkpoints(start, horizon);
  rep.hypotheses_met = law.hypotheses_met();
  rep.hypotheses_note = law.hypotheses_note();

  const std::size_t m = rep.checkpoints.size();
  std::vector<double> s_inv_i(m), s_half_i(m), s_inv(m), s_inv_sqrt_i(m), s_mod_i(m), s_mod(m);
  long double a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0, a6 = 0;
  long double harmonic = 0, root_harmonic = 0;  // running sums for the uniform law
  for (std::int64_t k = 1; k < start; ++k) {
    harmonic += 1.0L / k;
    root_harmonic += 1.0L / std::sqrt(static_cast<long double>(k));
  }
  std::size_t next = 0;
  for (std::int64_t i = start; i <= horizon; ++i) {
    double e1 = 0.0;
    double eh = 0.0;
    if (law.kind() == LawKind::Uniform) {
      harmonic += 1.0L / i;
      root_harmonic += 1.0L / std::sqrt(static_cast<long double>(i));
      e1 = static_cast<double>(harmonic / i);
      eh = static_cast<double>(root_harmonic / i);
    } else {
      e1 = law.inverse_moment(i, 1.0);
      eh = law.inverse_moment(i, 0.5);
    }
    const double id = static_cast<double>(i);
    a1 += e1 / (id + 1.0);
    a2 += eh / (id + 1.0);
    a3 += e1;
    a4 += e1 / std::sqrt(id + 1.0);
    if (modulus) {
      const double term = std::min(modulus(std::sqrt(e1)) * std::sqrt(e1), modulus(e1 / eh) * eh);
      a5 += term / (id + 1.0);
      a6 += term;
    }
    if (i == rep.checkpoints[next]) {
      s_inv_i[next] = static_cast<double>(a1);
      s_half_i[next] = static_cast<double>(a2);
      s_inv[next] = static_cast<double>(a3);
      s_inv_sqrt_i[next] = static_cast<double>(a4);
      s_mod_i[next] = static_cast<double>(a5);
      s_mod[next] = static_cast<double>(a6);
      ++next;
    }
  }
  const auto& cps = rep.checkpoints;
  rep.series.push_back(summarize("sum_inv_over_i", Target::Convergent, cps, s_inv_i));
  rep.series.push_back(summarize("sum_inv_sqrt_over_i", Target::Convergent, cps, s_half_i));
  rep.series.push_back(summarize("sum_inv", Target::SqrtNOverLogN, cps, s_inv));
  rep.series.push_back(summarize("sum_inv_over_sqrt_i", Target::SqrtLogN, cps, s_inv_sqrt_i));
  if (modulus) {
    rep.series.push_back(summarize("sum_modulus_over_i", Target::Convergent, cps, s_mod_i));
    rep.series.push_back(summarize("sum_modulus", Target::SqrtN, cps, s_mod));
  }
  return rep;
}

}  // namespace urnlab
