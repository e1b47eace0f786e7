// Command-line front end. Talks to the library only through urnlab.h.

#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "urnlab/urnlab.h"

namespace {

// Library messages already start with the status name.
int report_error(const char* verb, urnlab_status status) {
  const char* message = urnlab_last_error();
  if (*message == '\0') message = urnlab_status_name(status);
  std::fprintf(stderr, "urnlab %s: %s\n", verb, message);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and analysis of the four-colour urn with sampled reinforcement"};
  app.set_version_flag("--version", std::string(urnlab_version()));
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  unsigned threads = 0;
  bool print_json = false;
  auto* run = app.add_subcommand("run", "Run an experiment config and write report.json, summary.txt, checkpoints.csv");
  run->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--out", out_dir, "Output directory (overrides output.dir)");
  run->add_option("-j,--threads", threads, "Worker threads (overrides run.threads)");
  run->add_flag("--json", print_json, "Print report.json instead of the summary");

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Print the summary of a finished run and exit with its status");
  report->add_option("dir", report_dir, "Run directory")->required()->check(CLI::ExistingDirectory);
  report->add_flag("--json", print_json, "Print report.json instead of the summary");

  auto* catalog = app.add_subcommand("catalog", "List reinforcement functions and sample-size laws");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed() || report->parsed()) {
    urnlab_experiment* exp = nullptr;
    const urnlab_status st = run->parsed()
                                 ? urnlab_experiment_run(config.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
                                                         threads, &exp)
                                 : urnlab_report_load(report_dir.c_str(), &exp);
    if (st != URNLAB_OK) return report_error(run->parsed() ? "run" : "report", st);
    std::fputs(print_json ? urnlab_experiment_report_json(exp) : urnlab_experiment_summary(exp), stdout);
    if (print_json) std::fputc('\n', stdout);
    const int code = urnlab_experiment_exit_code(exp);
    urnlab_experiment_free(exp);
    return code;
  }
  if (catalog->parsed()) {
    urnlab_text* text = nullptr;
    const urnlab_status st = urnlab_catalog(&text);
    if (st != URNLAB_OK) return report_error("catalog", st);
    std::fputs(urnlab_text_data(text), stdout);
    urnlab_text_free(text);
    return 0;
  }
  return 2;
}
