#pragma once

#include <string>

#include "phstab/io.hpp"

namespace phstab::cli {

enum class Command { validate, generation, scan, classify };

struct RunConfig {
  std::string input_path;
  io::InputMode mode = io::InputMode::automatic;
  Command command = Command::classify;
  double omega_max = 50.0;
  long grid_points = 200001;
  double tol_sing = 1e-10;
  double tol_inconclusive = 1e-6;
  std::string report_path;  // empty: report JSON goes to stdout
  std::string csv_path;     // empty: no CSV
  int workers = 1;
};

inline constexpr int exit_ok = 0;            // verdict reached
inline constexpr int exit_parse = 1;         // input did not parse
inline constexpr int exit_invalid = 2;       // invariant violations (report written)
inline constexpr int exit_inconclusive = 3;  // numerics could not decide

/// Full batch pipeline: ingest, validate, generation test, spectral scan,
/// classification; writes the report (and CSV when requested) and returns
/// the exit status. Identical config and input produce byte-identical
/// outputs regardless of the worker count.
int run(const RunConfig& config);

/// Worker default: the PHSTAB_WORKERS environment variable, else 1.
int default_workers();

}  // namespace phstab::cli
