#include "phstab/runner.hpp"

#include <cstdlib>
#include <iostream>

namespace phstab::cli {

namespace {

const char* command_name(Command c) {
  switch (c) {
    case Command::validate: return "validate";
    case Command::generation: return "generation";
    case Command::scan: return "scan";
    default: return "classify";
  }
}

void emit_report(const io::ReportBundle& bundle, const RunConfig& cfg) {
  const std::string text = io::report_to_json(bundle).dump(2) + "\n";
  if (cfg.report_path.empty()) {
    std::cout << text;
  } else {
    io::write_text_atomic(cfg.report_path, text);
  }
}

}  // namespace

int default_workers() {
  if (const char* env = std::getenv("PHSTAB_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

int run(const RunConfig& cfg) {
  io::LoadedInput input;
  try {
    input = io::load_input(cfg.input_path, cfg.mode);
  } catch (const io::ParseError& e) {
    std::cerr << "parse error";
    if (e.line > 0) std::cerr << " at line " << e.line << ", column " << e.column;
    std::cerr << ": " << e.what() << "\n";
    return exit_parse;
  }

  io::ReportBundle bundle;
  bundle.command = command_name(cfg.command);
  bundle.mode = input.is_strings ? "strings" : "general";
  bundle.omega_max = cfg.omega_max;
  bundle.grid_points = cfg.grid_points;
  bundle.tol_sing = cfg.tol_sing;
  bundle.tol_inconclusive = cfg.tol_inconclusive;
  bundle.strings_input = input.strings_input;

  bundle.violations = input.input_violations;
  if (input.spec) {
    const auto report = validate_system(*input.spec);
    bundle.violations.insert(bundle.violations.end(), report.begin(), report.end());
  }
  if (!bundle.violations.empty()) {
    emit_report(bundle, cfg);
    return exit_invalid;
  }
  const SystemSpec& spec = *input.spec;
  if (cfg.command == Command::validate) {
    emit_report(bundle, cfg);
    return exit_ok;
  }

  bundle.generation = check_contraction_generator(spec);
  if (cfg.command == Command::generation) {
    emit_report(bundle, cfg);
    return exit_ok;
  }

  ScanOptions opts;
  opts.omega_max = cfg.omega_max;
  opts.grid_points = cfg.grid_points;
  opts.tol_sing = cfg.tol_sing;
  opts.tol_inconclusive = cfg.tol_inconclusive;
  opts.workers = cfg.workers;

  SpectralScan scan;
  try {
    if (bundle.generation->generates || cfg.command == Command::scan) {
      scan = scan_imaginary_axis(spec, opts);
    }
  } catch (const NonConvergenceError& e) {
    bundle.notes.push_back(std::string("inconclusive: ") + e.what());
    emit_report(bundle, cfg);
    return exit_inconclusive;
  }
  const bool have_scan = !scan.omegas.empty();
  if (have_scan) bundle.scan = &scan;

  if (!cfg.csv_path.empty() && have_scan) {
    if (input.is_strings) {
      std::vector<double> eta(scan.omegas.size());
      const double length = spec.b - spec.a;
      for (size_t i = 0; i < scan.omegas.size(); ++i) {
        eta[i] = strings::eta_squared(input.strings_input->speeds, scan.omegas[i], length);
      }
      io::write_scan_csv(scan, &eta, cfg.csv_path);
    } else {
      io::write_scan_csv(scan, nullptr, cfg.csv_path);
    }
  }
  if (cfg.command == Command::scan) {
    emit_report(bundle, cfg);
    return exit_ok;
  }

  std::optional<strings::ExactClassification> exact;
  if (input.is_strings) {
    if (input.strings_input->params.beta > 0.0) {
      exact = strings::classify_constant_strings(input.strings_input->speeds, spec.b - spec.a);
    } else {
      bundle.notes.push_back("exact classification requires beta > 0");
    }
  }
  bundle.stability = assemble_report(scan, opts, *bundle.generation, exact);
  emit_report(bundle, cfg);
  return bundle.stability->asymptotic == AsymptoticVerdict::Inconclusive ? exit_inconclusive
                                                                         : exit_ok;
}

}  // namespace phstab::cli
