#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "phstab/spectral.hpp"

namespace phstab::io {

/// JSON syntax or schema failure; line/column are 0 for schema-level
/// problems that have no byte position.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line_, int column_)
      : std::runtime_error(msg), line(line_), column(column_) {}
  int line;
  int column;
};

enum class InputMode { automatic, general, strings };

struct StringsInput {
  strings::StringNetworkParams params;
  strings::Speeds speeds;  // exact when speeds_exact was given
};

struct LoadedInput {
  bool is_strings = false;
  std::optional<SystemSpec> spec;  // absent when parameter violations block construction
  std::optional<StringsInput> strings_input;
  std::vector<Violation> input_violations;
};

/// Read and dispatch an input file. Mode `automatic` selects the strings
/// schema when a "rho" key is present. Throws ParseError on syntax or
/// schema problems; semantic problems (non-positive densities, speed
/// mismatches) land in input_violations instead.
LoadedInput load_input(const std::string& path, InputMode mode = InputMode::automatic);

/// General schema: n, N, interval [a, b], P (N+1 matrices), hamiltonian
/// {breakpoints, values}, W_B. A matrix is an array of rows; entries are
/// numbers or [re, im] pairs.
SystemSpec system_from_json(const nlohmann::json& j);
nlohmann::json system_to_json(const SystemSpec& spec);

/// Strings schema: rho [3], T [3], beta, interval [a, b], optional
/// speeds_exact [[p, q] x 3], optional independence_asserted.
StringsInput strings_from_json(const nlohmann::json& j, std::vector<Violation>* violations);

/// Scan CSV: header omega,sigma_min,psi_norm plus an eta column when
/// eta_column is non-null; 17 significant digits so values round-trip
/// bit-identically.
void write_scan_csv(const SpectralScan& scan, const std::vector<double>* eta_column,
                    const std::string& path);

struct ReportBundle {
  std::string command;
  std::string mode;
  double omega_max = 0.0;
  long grid_points = 0;
  double tol_sing = 0.0;
  double tol_inconclusive = 0.0;
  std::vector<Violation> violations;
  std::optional<StringsInput> strings_input;
  std::optional<GenerationVerdict> generation;
  const SpectralScan* scan = nullptr;
  std::optional<StabilityReport> stability;
  std::vector<std::string> notes;
};

nlohmann::ordered_json report_to_json(const ReportBundle& bundle);

/// Write-then-rename so readers never observe a partial file.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace phstab::io
