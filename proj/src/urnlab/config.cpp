#include "urnlab/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "urnlab/descriptor.hpp"
#include "urnlab/error.hpp"

namespace urnlab {

namespace {

bool key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

[[noreturn]] void syntax_error(int line, int column, const std::string& what) {
  raise(ErrorCode::Config, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text) {
  ConfigFile cfg;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size()) {
      if (end == text.size()) break;
      continue;
    }
    if (line[i] == '[') {
      const std::size_t close = line.find(']', i);
      if (close == std::string_view::npos) syntax_error(line_no, static_cast<int>(line.size()) + 1, "expected ']'");
      const std::string name = trim(line.substr(i + 1, close - i - 1));
      if (name.empty()) syntax_error(line_no, static_cast<int>(i) + 2, "empty section name");
      for (std::size_t k = 0; k < name.size(); ++k)
        if (!key_char(name[k])) syntax_error(line_no, static_cast<int>(i) + 2, "invalid section name '" + name + "'");
      if (!trim(line.substr(close + 1)).empty())
        syntax_error(line_no, static_cast<int>(close) + 2, "unexpected text after section header");
      section = name;
      continue;
    }
    const std::size_t key_start = i;
    while (i < line.size() && key_char(line[i])) ++i;
    if (i == key_start) syntax_error(line_no, static_cast<int>(i) + 1, "expected a key");
    const std::string key(line.substr(key_start, i - key_start));
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size() || line[i] != '=') syntax_error(line_no, static_cast<int>(i) + 1, "expected '=' after '" + key + "'");
    ++i;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::string value = trim(line.substr(i));
    if (value.empty()) syntax_error(line_no, static_cast<int>(i) + 1, "missing value for '" + key + "'");
    const std::string full = section.empty() ? key : section + "." + key;
    if (cfg.entries_.count(full))
      syntax_error(line_no, static_cast<int>(key_start) + 1,
                   "duplicate key '" + full + "' (first on line " + std::to_string(cfg.entries_[full].line) + ")");
    cfg.entries_[full] = Entry{value, line_no, static_cast<int>(i) + 1, false};
    if (end == text.size()) break;
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::Config, "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const ConfigFile::Entry& ConfigFile::entry(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) raise(ErrorCode::Config, "missing required key " + key);
  // Reads mark the entry so unknown keys can be reported afterwards.
  it->second.used = true;
  return it->second;
}

void ConfigFile::fail(const Entry& e, const std::string& key, const std::string& what) const {
  syntax_error(e.line, e.column, key + ": " + what);
}

std::string ConfigFile::text(const std::string& key) const { return entry(key).value; }

std::string ConfigFile::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

double ConfigFile::number(const std::string& key) const {
  const Entry& e = entry(key);
  double v = 0.0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  const auto [ptr, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || ptr != end) fail(e, key, "expected a number, got '" + e.value + "'");
  return v;
}

double ConfigFile::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::int64_t ConfigFile::integer(const std::string& key) const {
  const Entry& e = entry(key);
  std::int64_t v = 0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  const auto [ptr, ec] = std::from_chars(b, end, v);
  if (ec == std::errc() && ptr == end) return v;
  // Accept integral values written in floating-point form, e.g. 1e5.
  double d = 0.0;
  const auto [p2, ec2] = std::from_chars(b, end, d);
  if (ec2 == std::errc() && p2 == end && d == std::floor(d) && std::abs(d) < 9e15)
    return static_cast<std::int64_t>(d);
  fail(e, key, "expected an integer, got '" + e.value + "'");
}

std::int64_t ConfigFile::integer(const std::string& key, std::int64_t fallback) const {
  return has(key) ? integer(key) : fallback;
}

bool ConfigFile::boolean(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const Entry& e = entry(key);
  if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
  if (e.value == "false" || e.value == "no" || e.value == "0") return false;
  fail(e, key, "expected true or false, got '" + e.value + "'");
}

std::vector<std::int64_t> ConfigFile::integers(const std::string& key) const {
  const Entry& e = entry(key);
  std::vector<std::int64_t> out;
  std::string item;
  std::istringstream in(e.value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    double d = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), d);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || d != std::floor(d))
      fail(e, key, "expected a comma-separated list of integers");
    out.push_back(static_cast<std::int64_t>(d));
  }
  return out;
}

std::string ConfigFile::section_descriptor(const std::string& section, const std::string& first) const {
  const std::string prefix = section + ".";
  std::string out = first + "=" + text(prefix + first);
  for (auto& [key, e] : entries_) {
    if (key.rfind(prefix, 0) != 0 || key == prefix + first) continue;
    const std::string sub = key.substr(prefix.size());
    if (sub.find_first_of(" =,") != std::string::npos || e.value.find_first_of(" =,") != std::string::npos)
      fail(e, key, "descriptor values may not contain spaces, '=' or ','");
    e.used = true;
    out += " " + sub + "=" + e.value;
  }
  return out;
}

void ConfigFile::reject_unused() const {
  for (const auto& [key, e] : entries_)
    if (!e.used) syntax_error(e.line, 1, "unknown key '" + key + "'");
}

SamplingScheme parse_scheme(const std::string& text) {
  if (text == "with-replacement") return SamplingScheme::WithReplacement;
  if (text == "without-replacement") return SamplingScheme::WithoutReplacement;
  raise(ErrorCode::Config, "run.scheme must be with-replacement or without-replacement, got '" + text + "'");
}

namespace {

// Wraps domain errors from the factories as configuration errors.
template <class F>
auto as_config(const std::string& key, F&& build) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw;
    raise(ErrorCode::Config, key + ": " + e.what());
  }
}

}  // namespace

ExperimentConfig experiment_config(const ConfigFile& file) {
  ExperimentConfig cfg;
  RunConfig& run = cfg.run;
  run.params.p = file.number("model.p");
  run.params.q = file.number("model.q", 0.5);
  run.params.q1 = file.number("model.q1");
  run.params.q2 = file.number("model.q2");
  run.params.N = file.integer("model.N", 1);
  as_config("model", [&] { run.params.validate(true); return 0; });

  run.spec = as_config("reinforcement", [&] {
    return ReinforcementSpec::parse(file.section_descriptor("reinforcement", "kind"));
  });
  run.law = as_config("law", [&] { return SampleSizeLaw::parse(file.section_descriptor("law", "kind")); });

  run.scheme = parse_scheme(file.text("run.scheme", "with-replacement"));
  run.n_max = file.integer("run.n_max");
  run.checkpoints = file.has("run.checkpoints") ? file.integers("run.checkpoints")
                                                : default_checkpoints(run.params.N, run.n_max);
  run.seed = static_cast<std::uint64_t>(file.integer("run.seed"));
  run.replications = file.integer("run.replications");
  run.threads = static_cast<unsigned>(file.integer("run.threads", 0));
  const std::string sampler = file.text("run.sampler", "fast");
  if (sampler == "fast") run.mode = SamplerMode::Fast;
  else if (sampler == "naive") run.mode = SamplerMode::NaiveIndices;
  else raise(ErrorCode::Config, "run.sampler must be fast or naive");
  run.keep_path = file.boolean("run.keep_path", false);
  as_config("run", [&] { run.validate(); return 0; });

  AnalysisOptions& a = cfg.analysis;
  a.check_strong_law = file.boolean("analysis.check_strong_law", false);
  a.check_clt = file.boolean("analysis.check_clt", false);
  a.check_bounds = file.boolean("analysis.check_bounds", false);
  a.series_horizon = file.integer("analysis.series_horizon", 0);
  a.strong_law_tol = file.number("analysis.strong_law_tol", a.strong_law_tol);
  a.clt_tol_rel = file.number("analysis.clt_tol_rel", a.clt_tol_rel);
  a.clt_floor = file.number("analysis.clt_floor", a.clt_floor);
  a.ratio_low = file.number("analysis.ratio_low", a.ratio_low);
  a.ratio_high = file.number("analysis.ratio_high", a.ratio_high);
  a.min_direction_cosine = file.number("analysis.min_direction_cosine", a.min_direction_cosine);
  if (file.has("analysis.bound_epochs")) a.bound_epochs = file.integers("analysis.bound_epochs");
  a.bound_budget = file.number("analysis.bound_budget", a.bound_budget);
  a.hypotheses_fatal = file.boolean("analysis.hypotheses_fatal", false);
  if (!a.check_strong_law && !a.check_clt && !a.check_bounds && a.series_horizon == 0)
    raise(ErrorCode::Config, "enable at least one of analysis.check_strong_law, check_clt, check_bounds, series_horizon");
  if (a.series_horizon != 0 && a.series_horizon < 100)
    raise(ErrorCode::Config, "analysis.series_horizon must be 0 or at least 100");

  cfg.output = file.text("output.dir");
  file.reject_unused();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return experiment_config(ConfigFile::load(path));
}

}  // namespace urnlab
