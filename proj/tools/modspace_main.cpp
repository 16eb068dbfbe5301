// Command-line front end: `run <config.json>` executes one experiment and
// writes its CSV/JSON outputs, `oracle <case>` reruns an independent
// reference computation and writes a provenance file, `dump-info` lists
// presets. Exit codes: 0 pass, 1 estimate-tolerance failure, 2
// configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "modspace/experiments.hpp"
#include "modspace/version.hpp"

namespace tools {
int run_oracle_case(const std::string& name, const std::string& out_path);
void list_oracle_cases();
}  // namespace tools

namespace {

int cmd_run(const std::string& config_path, bool force_stability) {
  using namespace modspace;
  ExperimentConfig cfg = ExperimentConfig::from_json_file(config_path);
  if (force_stability) cfg.stability = true;
  EstimateReport rep = run_experiment(cfg);
  if (cfg.csv_path.empty()) std::fputs(report_to_csv(rep).c_str(), stdout);
  std::fprintf(stderr, "%s: C_T=%.6g pass=%s (%.2fs)\n",
               rep.experiment.c_str(), rep.C_T, rep.pass ? "yes" : "no",
               rep.runtime_seconds);
  for (const std::string& note : rep.notes)
    std::fprintf(stderr, "note: %s\n", note.c_str());
  return rep.pass ? 0 : 1;
}

void cmd_dump_info() {
  std::printf("modspace %s\n", modspace::kVersion);
  std::printf("experiments: free-bound free-decay quadratic-bound "
              "subquadratic-bound kernel-decay picard-compare "
              "transform-roundtrip\n");
  std::printf("clifford presets: dirac1d (N=1, m=2)  dirac2d (N=2, m=2)  "
              "dirac3d (N=3, m=4)\n");
  std::printf("quadratic potentials: zero harmonic inverted linear cosine "
              "driven-linear\n");
  std::printf("hermitian potentials: trig em linear-sigma3\n");
  std::printf("bounded potentials: hermitian-bounded nonhermitian-bounded\n");
  std::printf("windows: gaussian (config key window.width)\n");
  std::printf("env: MODSPACE_THREADS overrides worker count\n");
  tools::list_oracle_cases();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase-space numerics for Dirac-type systems"};
  app.require_subcommand(1);

  std::string config_path;
  bool force_stability = false;
  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_flag("--stability", force_stability,
                "force the refinement-stability companion run");

  std::string oracle_case, oracle_out = "oracle.json";
  CLI::App* oracle =
      app.add_subcommand("oracle", "rerun an independent oracle computation");
  oracle->add_option("case", oracle_case, "oracle case name")->required();
  oracle->add_option("-o,--out", oracle_out, "provenance output path");

  CLI::App* info = app.add_subcommand("dump-info", "print presets and version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, force_stability);
    if (oracle->parsed()) return tools::run_oracle_case(oracle_case, oracle_out);
    if (info->parsed()) {
      cmd_dump_info();
      return 0;
    }
  } catch (const modspace::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
