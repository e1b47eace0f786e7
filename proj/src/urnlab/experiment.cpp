#include "urnlab/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "urnlab/analysis.hpp"
#include "urnlab/descriptor.hpp"

namespace urnlab {

using nlohmann::json;

namespace {

json matrix_json(const Matrix3& m) {
  json out = json::array();
  for (int i = 0; i < 3; ++i) out.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return out;
}

json vector_json(const Vector3& v) { return {v[0], v[1], v[2]}; }

json verdict_json(const Verdict& v) {
  return {{"rule", v.rule},           {"quantity", v.quantity}, {"empirical", v.empirical},
          {"theory", v.theory},       {"tolerance", v.tolerance}, {"pass", v.pass}};
}

json fixed_point_json(const FixedPointReport& fp) {
  json out = {{"map", to_string(fp.map_kind)},
              {"x_star", fp.x_star},
              {"y_star", fp.y_star},
              {"z_star", fp.z_star},
              {"residual", fp.residual},
              {"iterations", fp.iterations},
              {"contraction_margin", fp.margin},
              {"linearized", fp.linearized},
              {"caveats", fp.caveats}};
  if (fp.linearized) {
    out["alpha_star"] = fp.alpha_star;
    out["beta_star"] = fp.beta_star;
    out["kappa"] = fp.kappa;
    out["rho"] = fp.rho;
  }
  return out;
}

json asymptotics_json(const AsymptoticsReport& r) {
  json out = {{"regime", to_string(r.regime)},
              {"scaling", to_string(r.scaling)},
              {"boundary_snapped", r.boundary_snapped},
              {"gamma", matrix_json(r.matrices.gamma)},
              {"t", matrix_json(r.matrices.t)},
              {"caveats", r.caveats}};
  if (r.matrices.has_tbar) out["tbar"] = matrix_json(r.matrices.tbar);
  if (r.blocks.has_a) out["a_blocks"] = matrix_json(r.blocks.a);
  if (r.blocks.has_b) out["b_blocks"] = matrix_json(r.blocks.b);
  if (r.blocks.has_c) out["c_blocks"] = {r.blocks.c[0], r.blocks.c[1], r.blocks.c[2]};
  if (r.sigma) out["sigma"] = matrix_json(*r.sigma);
  if (r.direction) out["direction"] = vector_json(*r.direction);
  return out;
}

json series_json(const SeriesReport& s) {
  json out = {{"law", s.law},
              {"start", s.start},
              {"horizon", s.horizon},
              {"checkpoints", s.checkpoints},
              {"hypotheses_met", s.hypotheses_met},
              {"hypotheses_note", s.hypotheses_note}};
  json list = json::array();
  for (const SeriesSummary& ss : s.series)
    list.push_back({{"name", ss.name},
                    {"target", ss.target},
                    {"partial_sums", ss.partial_sums},
                    {"raw_slope", ss.raw_slope},
                    {"normalized_slope", ss.normalized_slope},
                    {"increment_slope", ss.increment_slope},
                    {"log_squared_slope", ss.log_squared_slope},
                    {"flag", to_string(ss.flag)},
                    {"target_met", ss.target_met}});
  out["series"] = list;
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) raise(ErrorCode::Io, "failed writing " + path.string());
}

std::string summary_from_report(const json& rep) {
  std::ostringstream s;
  const json& cfg = rep.at("config");
  s << "urnlab experiment\n";
  s << "  model p=" << format_number(cfg["p"].get<double>()) << " q=" << format_number(cfg["q"].get<double>())
    << " q1=" << format_number(cfg["q1"].get<double>()) << " q2=" << format_number(cfg["q2"].get<double>())
    << " N=" << cfg["N"].get<std::int64_t>() << "\n";
  s << "  reinforcement " << cfg["reinforcement"].get<std::string>() << "\n";
  s << "  law " << cfg["law"].get<std::string>() << ", " << cfg["scheme"].get<std::string>() << "\n";
  s << "  n_max " << cfg["n_max"].get<std::int64_t>() << ", replications "
    << cfg["replications"].get<std::int64_t>() << ", seed " << cfg["seed"].get<std::uint64_t>() << "\n";
  if (rep.contains("fixed_point")) {
    const json& fp = rep["fixed_point"];
    s << "fixed point (" << fp["map"].get<std::string>() << " map): x*="
      << format_number(fp["x_star"].get<double>()) << " y*=" << format_number(fp["y_star"].get<double>())
      << " z*=" << format_number(fp["z_star"].get<double>()) << ", margin "
      << format_number(fp["contraction_margin"].get<double>()) << "\n";
    if (fp["linearized"].get<bool>())
      s << "  alpha*=" << format_number(fp["alpha_star"].get<double>())
        << " beta*=" << format_number(fp["beta_star"].get<double>())
        << " kappa=" << format_number(fp["kappa"].get<double>())
        << " rho=" << format_number(fp["rho"].get<double>()) << "\n";
  }
  if (rep.contains("asymptotics")) {
    const json& a = rep["asymptotics"];
    s << "regime " << a["regime"].get<std::string>() << ", scaling " << a["scaling"].get<std::string>() << "\n";
    if (a.contains("sigma")) {
      s << "  limiting covariance\n";
      for (const json& row : a["sigma"]) {
        s << "   ";
        for (const json& v : row) {
          char buf[32];
          std::snprintf(buf, sizeof buf, " %12.6g", v.get<double>());
          s << buf;
        }
        s << "\n";
      }
    }
  }
  if (rep.contains("series")) {
    s << "series for " << rep["series"]["law"].get<std::string>() << "\n";
    for (const json& ss : rep["series"]["series"])
      s << "  " << ss["name"].get<std::string>() << ": " << ss["flag"].get<std::string>()
        << " (target " << ss["target"].get<std::string>() << ", "
        << (ss["target_met"].get<bool>() ? "met" : "not met") << ")\n";
  }
  const json& verdicts = rep.at("verdicts");
  if (!verdicts.empty()) s << "verdicts\n";
  for (const json& v : verdicts) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %s %-22s %-46s emp %-12.6g theory %-12.6g tol %.3g\n",
                  v["pass"].get<bool>() ? "PASS" : "FAIL", v["rule"].get<std::string>().c_str(),
                  v["quantity"].get<std::string>().c_str(), v["empirical"].get<double>(),
                  v["theory"].get<double>(), v["tolerance"].get<double>());
    s << buf;
  }
  for (const json& h : rep.at("hypotheses_unmet")) s << "hypothesis not met: " << h.get<std::string>() << "\n";
  for (const json& c : rep.at("caveats")) s << "caveat: " << c.get<std::string>() << "\n";
  s << "exit status " << rep.at("exit_code").get<int>() << "\n";
  return s.str();
}

int exit_code_from_report(const json& rep) {
  if (rep.value("hypothesis_stop", false)) return ExitHypothesis;
  for (const json& v : rep.at("verdicts"))
    if (!v.at("pass").get<bool>()) return ExitStatisticalFail;
  return ExitPass;
}

}  // namespace

ExperimentOutcome run_experiment(const std::filesystem::path& config_path, const ExperimentOverrides& overrides) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  if (overrides.output) cfg.output = *overrides.output;
  if (overrides.threads) cfg.run.threads = *overrides.threads;
  return run_experiment(cfg);
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  const RunConfig& run = cfg.run;
  const AnalysisOptions& opt = cfg.analysis;
  run.validate();

  json rep;
  rep["config"] = {{"p", run.params.p},
                   {"q", run.params.q},
                   {"q1", run.params.q1},
                   {"q2", run.params.q2},
                   {"N", run.params.N},
                   {"reinforcement", run.spec.descriptor()},
                   {"law", run.law.descriptor()},
                   {"scheme", to_string(run.scheme)},
                   {"n_max", run.n_max},
                   {"checkpoints", run.checkpoints},
                   {"seed", run.seed},
                   {"replications", run.replications},
                   {"sampler", run.mode == SamplerMode::Fast ? "fast" : "naive"}};
  std::vector<Verdict> verdicts;
  std::vector<std::string> unmet;
  std::vector<std::string> caveats;

  std::optional<FixedPointReport> fp;
  std::optional<AsymptoticsReport> asym;
  try {
    const SelectionMap map = SelectionMap::for_law(run.spec, run.params, run.law);
    FixedPointReport rep_fp = solve_fixed_point(map);
    try {
      local_linearization(rep_fp, map);
    } catch (const Error& e) {
      caveats.push_back(std::string("no linearization: ") + e.what());
    }
    if (!(rep_fp.margin < 1.0)) unmet.push_back("contraction margin " + format_number(rep_fp.margin) + " >= 1");
    fp = rep_fp;
    if (rep_fp.linearized) {
      try {
        asym = analyze_asymptotics(rep_fp);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Hypothesis && e.code() != ErrorCode::Case) throw;
        unmet.push_back(e.what());
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::Domain)
      unmet.push_back(std::string("theory unavailable: ") + e.what());
    else
      unmet.push_back(std::string("theory failed: ") + e.what());
  }
  if (fp) rep["fixed_point"] = fixed_point_json(*fp);
  if (asym) rep["asymptotics"] = asymptotics_json(*asym);
  if (run.law.scenario() == Scenario::EpochLaw && !run.law.hypotheses_met())
    unmet.push_back(run.law.hypotheses_note());

  if (opt.series_horizon > 0) {
    std::function<double(double)> modulus;
    const auto level = run.spec.smoothness().level;
    if (level == Smoothness::C2 || (level == Smoothness::C1 && run.spec.smoothness().gradient_modulus))
      modulus = [&](double d) { return modulus_bound(run.spec, run.params, d); };
    rep["series"] = series_json(series_report(run.law, opt.series_horizon, 1, modulus));
  }

  if (opt.check_bounds) {
    json bounds = json::array();
    for (std::int64_t n : opt.bound_epochs) {
      const BoundCheck bc = check_bernstein_bounds(run.spec, run.params, run.law, n, opt.bound_budget);
      json entry = {{"n", n},
                    {"grid_resolution", bc.resolution},
                    {"hn_sup", bc.hn.sup},
                    {"lattice_checked", bc.en_checked},
                    {"lattice_stride", bc.stride},
                    {"violations", bc.violations}};
      if (bc.en_checked) entry["en_sup"] = bc.en.sup;
      const double sup = bc.en_checked ? std::max(bc.hn.sup, bc.en.sup) : bc.hn.sup;
      for (const GapBound& b : bc.bounds) {
        entry["bounds"][to_string(b.lemma)] = b.bound;
        verdicts.push_back({"bernstein-bound", std::string(to_string(b.lemma)) + " bound, n=" + std::to_string(n),
                            sup, b.bound, kGapRounding, sup <= b.bound + kGapRounding});
      }
      bounds.push_back(entry);
    }
    rep["bounds"] = bounds;
  }

  const bool stop = !unmet.empty() && opt.hypotheses_fatal;
  std::optional<EnsembleStats> stats;
  if (!stop && (opt.check_strong_law || opt.check_clt)) {
    std::optional<DeviationScaling> scaling;
    if (asym) scaling = deviation_scaling(*asym);
    stats = run_ensemble(run, scaling);
    json cps = json::array();
    for (const CheckpointStats& c : stats->checkpoints)
      cps.push_back({{"n", c.n},
                     {"mean", vector_json(c.mean)},
                     {"cov", matrix_json(c.cov)},
                     {"deviation_mean", vector_json(c.deviation_mean)},
                     {"deviation_cov", matrix_json(c.deviation_cov)}});
    rep["ensemble"] = {{"replications", stats->replications},
                       {"deviations_centered_on_theory", stats->centered_on_theory},
                       {"scaling", stats->centered_on_theory ? to_string(stats->scaling.scaling) : "sqrt(n)"},
                       {"checkpoints", cps}};
    if (opt.check_strong_law) {
      if (fp) {
        for (const Verdict& v : strong_law_check(*stats, *fp, opt.strong_law_tol)) verdicts.push_back(v);
      } else {
        verdicts.push_back({"strong-law", "fixed point unavailable", 0.0, 0.0, 0.0, false});
      }
    }
    if (opt.check_clt) {
      if (asym) {
        CltOptions co;
        co.tol_rel = opt.clt_tol_rel;
        co.floor = opt.clt_floor;
        co.ratio_low = opt.ratio_low;
        co.ratio_high = opt.ratio_high;
        co.min_direction_cosine = opt.min_direction_cosine;
        for (const Verdict& v : clt_check(*stats, *asym, co)) verdicts.push_back(v);
      } else {
        verdicts.push_back({"clt", "regime unavailable", 0.0, 0.0, 0.0, false});
      }
    }
  }

  json vj = json::array();
  for (const Verdict& v : verdicts) vj.push_back(verdict_json(v));
  rep["verdicts"] = vj;
  rep["hypotheses_unmet"] = unmet;
  rep["hypothesis_stop"] = stop;
  rep["caveats"] = caveats;
  rep["runtime"] = {{"threads_configured", run.threads}, {"library", "urnlab 0.1.0"}};
  const int code = exit_code_from_report(rep);
  rep["exit_code"] = code;

  ExperimentOutcome out;
  out.exit_code = code;
  out.report_json = rep.dump(2);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out.summary = summary_from_report(rep) + "wall time " + format_number(std::round(seconds * 100) / 100) + " s\n";
  out.output = cfg.output;

  std::error_code ec;
  std::filesystem::create_directories(cfg.output, ec);
  if (ec) raise(ErrorCode::Io, "cannot create " + cfg.output.string() + ": " + ec.message());
  write_file(cfg.output / "report.json", out.report_json + "\n");
  write_file(cfg.output / "summary.txt", out.summary);
  if (stats) write_file(cfg.output / "checkpoints.csv", format_csv(csv_rows(*stats)));
  return out;
}

ExperimentOutcome load_report(const std::filesystem::path& dir) {
  const auto path = dir / "report.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::Io, "cannot read " + path.string());
  json rep;
  try {
    in >> rep;
  } catch (const json::exception& e) {
    raise(ErrorCode::Io, path.string() + ": " + e.what());
  }
  ExperimentOutcome out;
  try {
    out.exit_code = exit_code_from_report(rep);
    out.summary = summary_from_report(rep);
  } catch (const json::exception& e) {
    raise(ErrorCode::Io, path.string() + " is not an urnlab report: " + e.what());
  }
  out.report_json = rep.dump(2);
  out.output = dir;
  return out;
}

std::string catalog_text() {
  std::ostringstream s;
  s << "reinforcement functions\n";
  for (const CatalogEntry& e : reinforcement_catalog())
    s << "  " << e.name << "\n    " << e.example << "\n    " << e.notes << "\n";
  s << "\nbuilt-in samples\n";
  for (const ReinforcementSpec& spec : builtin_reinforcement_samples())
    s << "  " << spec.descriptor() << "\n    " << spec.annotation() << "\n";
  s << "\nsample-size laws\n";
  for (const CatalogLaw& l : law_catalog()) s << "  " << l.name << "\n    " << l.example << "\n    " << l.notes << "\n";
  return s.str();
}

const char* const kCsvHeader =
    "n,mean_a,mean_b,mean_c,cov_aa,cov_ab,cov_ac,cov_bb,cov_bc,cov_cc,"
    "dev_aa,dev_ab,dev_ac,dev_bb,dev_bc,dev_cc";

std::vector<CsvRow> csv_rows(const EnsembleStats& stats) {
  std::vector<CsvRow> rows;
  for (const CheckpointStats& c : stats.checkpoints) {
    CsvRow r;
    r.n = c.n;
    for (int i = 0; i < 3; ++i) r.mean[i] = c.mean[i];
    int k = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j, ++k) {
        r.cov[k] = c.cov(i, j);
        r.deviation_cov[k] = c.deviation_cov(i, j);
      }
    rows.push_back(r);
  }
  return rows;
}

std::string format_csv(const std::vector<CsvRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  char buf[32];
  for (const CsvRow& r : rows) {
    out += std::to_string(r.n);
    auto put = [&](double v) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    };
    for (double v : r.mean) put(v);
    for (double v : r.cov) put(v);
    for (double v : r.deviation_cov) put(v);
    out += "\n";
  }
  return out;
}

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) raise(ErrorCode::Io, "unexpected checkpoints.csv header");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 16) raise(ErrorCode::Io, "checkpoints.csv row has " + std::to_string(cells.size()) + " cells");
    auto num = [&](const std::string& c) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (end == c.c_str() || *end != '\0') raise(ErrorCode::Io, "bad number '" + c + "' in checkpoints.csv");
      return v;
    };
    CsvRow r;
    r.n = static_cast<std::int64_t>(num(cells[0]));
    for (int i = 0; i < 3; ++i) r.mean[i] = num(cells[1 + i]);
    for (int i = 0; i < 6; ++i) r.cov[i] = num(cells[4 + i]);
    for (int i = 0; i < 6; ++i) r.deviation_cov[i] = num(cells[10 + i]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace urnlab
