#include <CLI11.hpp>

#include "phstab/runner.hpp"

using phstab::cli::Command;
using phstab::cli::RunConfig;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg, std::string& mode) {
  sub->add_option("input", cfg.input_path, "system or string-network JSON file")->required();
  sub->add_option("--mode", mode, "input schema: auto, general, or strings")
      ->check(CLI::IsMember({"auto", "general", "strings"}))
      ->default_val("auto");
  sub->add_option("--omega-max", cfg.omega_max, "half width of the frequency window");
  sub->add_option("--grid-points", cfg.grid_points, "scan grid points over [-omega_max, omega_max]");
  sub->add_option("--tol-sing", cfg.tol_sing, "singularity tolerance certifying an eigenvalue");
  sub->add_option("--tol-inconclusive", cfg.tol_inconclusive,
                  "refined minima below this are flagged inconclusive");
  sub->add_option("--out-report", cfg.report_path, "report JSON path (default: stdout)");
  sub->add_option("--out-csv", cfg.csv_path, "scan CSV path");
  sub->add_option("--workers", cfg.workers, "scan worker threads (default: PHSTAB_WORKERS or 1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"port-Hamiltonian boundary-value stability analyser"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.workers = phstab::cli::default_workers();
  std::string mode = "auto";

  auto* validate = app.add_subcommand("validate", "check the structural assumptions");
  auto* generation = app.add_subcommand("generation", "contraction-semigroup generation test");
  auto* scan = app.add_subcommand("scan", "sigma_min sweep along the imaginary axis");
  auto* classify = app.add_subcommand("classify", "full stability classification");
  for (auto* sub : {validate, generation, scan, classify}) add_common(sub, cfg, mode);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : phstab::cli::exit_parse;
  }

  if (validate->parsed()) cfg.command = Command::validate;
  if (generation->parsed()) cfg.command = Command::generation;
  if (scan->parsed()) cfg.command = Command::scan;
  if (classify->parsed()) cfg.command = Command::classify;
  if (mode == "general") cfg.mode = phstab::io::InputMode::general;
  if (mode == "strings") cfg.mode = phstab::io::InputMode::strings;

  return phstab::cli::run(cfg);
}
