#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "urnlab/asymptotics.hpp"
#include "urnlab/model.hpp"
#include "urnlab/reinforcement.hpp"
#include "urnlab/sample_laws.hpp"

namespace urnlab {

struct RunConfig {
  ModelParams params;
  ReinforcementSpec spec = ReinforcementSpec::constant(0.5);
  SamplingScheme scheme = SamplingScheme::WithReplacement;
  SampleSizeLaw law = SampleSizeLaw::fixed(1);
  std::int64_t n_max = 100000;
  /// Ascending epochs in (N, n_max].
  std::vector<std::int64_t> checkpoints;
  std::uint64_t seed = 1;
  std::int64_t replications = 1;
  SamplerMode mode = SamplerMode::Fast;
  /// Worker threads for ensembles; 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Keep the walker position after every epoch.
  bool keep_path = false;

  void validate() const;
};

/// 10^3, 10^3.5, ..., capped at n_max and kept above N.
std::vector<std::int64_t> default_checkpoints(std::int64_t n_min, std::int64_t n_max);

struct CheckpointRecord {
  std::int64_t n = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
  std::int64_t d = 0;
  std::int64_t position = 0;
};

struct Trajectory {
  std::vector<CheckpointRecord> records;
  /// Walker positions after epochs N + 1, ..., n_max; filled only with
  /// keep_path.
  std::vector<std::int64_t> path;
};

/// Replication `index` of the run. The generator is
/// RandomSource::for_replication(config.seed, index).
Trajectory run_trajectory(const RunConfig& config, std::int64_t replication_index);

/// Centre and scaling for the deviation rows of an ensemble.
struct DeviationScaling {
  Vector3 center = Vector3::Zero();
  Scaling scaling = Scaling::SqrtN;
  double rho = 0.5;
};
DeviationScaling deviation_scaling(const AsymptoticsReport& report);

struct CheckpointStats {
  std::int64_t n = 0;
  /// Mean and covariance of (a/n, b/n, c/n).
  Vector3 mean = Vector3::Zero();
  Matrix3 cov = Matrix3::Zero();
  /// scale(n) * ((a, b, c)/n - centre), one row per replication.
  std::vector<Vector3> deviations;
  Vector3 deviation_mean = Vector3::Zero();
  Matrix3 deviation_cov = Matrix3::Zero();
};

struct EnsembleStats {
  std::int64_t replications = 0;
  /// Whether deviations are centred at a theoretical root (else the
  /// ensemble mean, scaled by sqrt(n)).
  bool centered_on_theory = false;
  DeviationScaling scaling;
  std::vector<CheckpointStats> checkpoints;
};

/// Runs the replications on worker threads and reduces in index order, so
/// the result depends only on the config.
EnsembleStats run_ensemble(const RunConfig& config,
                           const std::optional<DeviationScaling>& scaling = std::nullopt);

/// Mean and unbiased covariance of rows.
void sample_moments(const std::vector<Vector3>& rows, Vector3& mean, Matrix3& cov);

}  // namespace urnlab
