#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "urnlab/model.hpp"
#include "urnlab/random.hpp"

namespace urnlab {

/// One law on [M] for every epoch, or a law indexed by the epoch n.
enum class Scenario { FixedLaw, EpochLaw };

enum class LawKind { Fixed, CustomPmf, Uniform, TruncatedGeometric, ShiftedBinomial, TruncatedPoisson };

const char* to_string(Scenario s) noexcept;
const char* to_string(LawKind k) noexcept;

/// Probability masses on the consecutive sizes first_k, first_k + 1, ...
/// Sizes whose mass is below 1e-20 at either end are dropped; their total is
/// `dropped`.
struct SizeMasses {
  std::int64_t first_k = 1;
  std::vector<double> mass;
  double dropped = 0.0;

  std::int64_t last_k() const { return first_k + static_cast<std::int64_t>(mass.size()) - 1; }
};

/// Distribution of the sample size K_n.
class SampleSizeLaw {
 public:
  static SampleSizeLaw fixed(std::int64_t k);
  /// Masses of sizes 1..M; must sum to 1 within 1e-12.
  static SampleSizeLaw custom_pmf(std::vector<double> masses);
  static SampleSizeLaw uniform();
  /// min{n, Geometric(c n^-alpha)}.
  static SampleSizeLaw truncated_geometric(double c, double alpha);
  /// 1 + Binomial(n - 1, c n^-alpha).
  static SampleSizeLaw shifted_binomial(double c, double alpha);
  /// min{n, 1 + Poisson(c n^alpha)}.
  static SampleSizeLaw truncated_poisson(double c, double alpha);

  /// "kind=uniform", "kind=fixed k=5", "kind=binomial c=1 alpha=0.3",
  /// "kind=custom-pmf pmf=0.2/0.3/0.5".
  static SampleSizeLaw parse(std::string_view descriptor);

  LawKind kind() const { return kind_; }
  Scenario scenario() const;
  std::string descriptor() const;
  /// Largest size with positive mass at epoch n.
  std::int64_t max_size(std::int64_t n) const;
  /// For fixed laws, the masses of sizes 1..M; empty for epoch-indexed laws.
  std::vector<double> fixed_masses() const;
  /// Success probability (geometric, binomial) or mean (Poisson) at epoch n.
  double rate(std::int64_t n) const;

  double pmf(std::int64_t n, std::int64_t k) const;
  SizeMasses masses(std::int64_t n) const;
  std::int64_t sample(std::int64_t n, RandomSource& rng) const;
  /// E[K_n^-power] by exact summation over the support.
  double inverse_moment(std::int64_t n, double power) const;

  /// Whether the catalog's growth hypotheses hold for the chosen exponent.
  bool hypotheses_met() const;
  std::string hypotheses_note() const;

 private:
  SampleSizeLaw() = default;
  double raw_inverse_moment(std::int64_t n, double power) const;

  LawKind kind_ = LawKind::Fixed;
  std::int64_t k_ = 1;
  double c_ = 1.0;
  double alpha_ = 0.0;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

struct CatalogLaw {
  std::string name;
  std::string example;
  std::string notes;
};
std::vector<CatalogLaw> law_catalog();

struct InverseMomentTable {
  std::int64_t n = 0;
  double e_inv = 0.0;
  double e_inv_sqrt = 0.0;
};
InverseMomentTable inverse_moments(const SampleSizeLaw& law, std::int64_t n);

/// Mean and variance of V1/k and V2/k for one sample.
struct ConditionalMoments {
  double mean1 = 0.0;
  double var1 = 0.0;
  double mean2 = 0.0;
  double var2 = 0.0;
};
ConditionalMoments conditional_moments_with_replacement(double x, double y, std::int64_t k);
ConditionalMoments conditional_moments_without_replacement(std::int64_t n, std::int64_t r1,
                                                           std::int64_t r2, std::int64_t k);

enum class SeriesFlag { ConvergentLooking, SqrtNOverLogN, SqrtN, Inconsistent };
const char* to_string(SeriesFlag f) noexcept;

struct SeriesSummary {
  std::string name;
  std::string target;  // what the theory asks of this series
  std::vector<double> partial_sums;  // at SeriesReport::checkpoints
  double raw_slope = 0.0;        // d log S / d log n over the last decade
  double normalized_slope = 0.0; // same for S / sqrt(n / log n)
  double increment_slope = 0.0;  // slope of the per-checkpoint increments
  double log_squared_slope = 0.0;  // same for S / (log n)^2
  SeriesFlag flag = SeriesFlag::Inconsistent;
  bool target_met = false;
};

struct SeriesReport {
  std::string law;
  std::int64_t start = 1;
  std::int64_t horizon = 0;
  std::vector<std::int64_t> checkpoints;
  std::vector<SeriesSummary> series;
  bool hypotheses_met = true;
  std::string hypotheses_note;

  const SeriesSummary& get(const std::string& name) const;
};

/// `modulus`, when given, maps delta to a bound on omega(grad g; delta) and
/// enables the modulus-based series.
SeriesReport series_report(const SampleSizeLaw& law, std::int64_t horizon, std::int64_t start = 1,
                           const std::function<double(double)>& modulus = {});

}  // namespace urnlab
