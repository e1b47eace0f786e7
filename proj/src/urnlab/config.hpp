#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "urnlab/simulator.hpp"

namespace urnlab {

/// Flat key/value text:
///
///   # comment
///   [section]
///   key = value          # stored as section.key
///   other.key = value    # dotted keys work anywhere
///
/// Errors carry the line and column of the offending text.
class ConfigFile {
 public:
  struct Entry {
    std::string value;
    int line = 0;
    int column = 0;  // column of the value
    mutable bool used = false;
  };

  static ConfigFile parse(std::string_view text);
  static ConfigFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::string text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  std::int64_t integer(const std::string& key) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::vector<std::int64_t> integers(const std::string& key) const;
  /// "section.a = 1" and "section.b = 2" become "a=1 b=2", without `skip`.
  std::string section_descriptor(const std::string& section, const std::string& first) const;
  /// Raises on any key no accessor has read.
  void reject_unused() const;

 private:
  const Entry& entry(const std::string& key) const;
  [[noreturn]] void fail(const Entry& e, const std::string& key, const std::string& what) const;

  std::map<std::string, Entry> entries_;
};

struct AnalysisOptions {
  bool check_strong_law = false;
  bool check_clt = false;
  bool check_bounds = false;
  std::int64_t series_horizon = 0;
  double strong_law_tol = 0.01;
  double clt_tol_rel = 0.15;
  double clt_floor = 0.01;
  double ratio_low = 0.5;
  double ratio_high = 2.0;
  double min_direction_cosine = 0.95;
  std::vector<std::int64_t> bound_epochs{10, 100};
  double bound_budget = 1e8;
  /// Exit with status 3 instead of continuing when a hypothesis fails.
  bool hypotheses_fatal = false;
};

struct ExperimentConfig {
  RunConfig run;
  AnalysisOptions analysis;
  std::filesystem::path output;
};

/// Raises Config errors naming the key (and its line for bad values).
ExperimentConfig experiment_config(const ConfigFile& file);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

SamplingScheme parse_scheme(const std::string& text);

}  // namespace urnlab
