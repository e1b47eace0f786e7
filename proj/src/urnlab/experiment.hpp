#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "urnlab/config.hpp"

namespace urnlab {

enum ExitStatus : int { ExitPass = 0, ExitStatisticalFail = 1, ExitConfigError = 2, ExitHypothesis = 3 };

struct ExperimentOverrides {
  std::optional<std::filesystem::path> output;
  std::optional<unsigned> threads;
};

struct ExperimentOutcome {
  int exit_code = ExitPass;
  std::string report_json;
  std::string summary;
  std::filesystem::path output;
};

/// Parses the config, runs theory, bounds, series and the ensemble as
/// configured, writes report.json, summary.txt and checkpoints.csv. Config
/// problems raise Config errors.
ExperimentOutcome run_experiment(const std::filesystem::path& config_path,
                                 const ExperimentOverrides& overrides = {});
ExperimentOutcome run_experiment(const ExperimentConfig& config);

/// Reads report.json from a run directory and rebuilds the summary and the
/// exit status from its verdicts.
ExperimentOutcome load_report(const std::filesystem::path& dir);

/// Built-in reinforcement kinds and sample-size laws with the hypotheses
/// they meet.
std::string catalog_text();

/// One row of checkpoints.csv. Covariances hold the upper triangle in the
/// order aa, ab, ac, bb, bc, cc.
struct CsvRow {
  std::int64_t n = 0;
  std::array<double, 3> mean{};
  std::array<double, 6> cov{};
  std::array<double, 6> deviation_cov{};
  friend bool operator==(const CsvRow&, const CsvRow&) = default;
};

extern const char* const kCsvHeader;
std::vector<CsvRow> csv_rows(const EnsembleStats& stats);
std::string format_csv(const std::vector<CsvRow>& rows);
std::vector<CsvRow> parse_csv(const std::string& text);

}  // namespace urnlab
