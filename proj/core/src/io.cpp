#include "phstab/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace phstab::io {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::pair<int, int> line_col(const std::string& text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] void schema_error(const std::string& msg) { throw ParseError(msg, 0, 0); }

double number_at(const json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_number()) schema_error("expected number at key '" + key + "'");
  return j.at(key).get<double>();
}

Complex entry_from_json(const json& e) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return Complex(e[0].get<double>(), e[1].get<double>());
  }
  schema_error("matrix entry must be a number or an [re, im] pair");
}

CMatrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) schema_error(what + ": matrix must be a non-empty array of rows");
  const size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) schema_error(what + ": rows must be non-empty arrays");
  const size_t cols = j[0].size();
  CMatrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) schema_error(what + ": ragged rows");
    for (size_t c = 0; c < cols; ++c) m(r, c) = entry_from_json(j[r][c]);
  }
  return m;
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(row);
  }
  return rows;
}

std::pair<double, double> interval_from_json(const json& j) {
  if (!j.contains("interval") || !j.at("interval").is_array() || j.at("interval").size() != 2) {
    schema_error("expected interval: [a, b]");
  }
  return {j.at("interval")[0].get<double>(), j.at("interval")[1].get<double>()};
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* asymptotic_name(AsymptoticVerdict v) {
  switch (v) {
    case AsymptoticVerdict::StableCertified: return "stable_certified_up_to_Omega";
    case AsymptoticVerdict::Unstable: return "unstable";
    case AsymptoticVerdict::Inconclusive: return "inconclusive";
    default: return "not_assessed";
  }
}

const char* exponential_name(ExponentialVerdict v) {
  switch (v) {
    case ExponentialVerdict::NoObstruction: return "no_obstruction_up_to_Omega";
    case ExponentialVerdict::Obstructed: return "obstructed";
    case ExponentialVerdict::Exact: return "exact";
    default: return "not_assessed";
  }
}

const char* strings_status_name(strings::NetworkStability s) {
  switch (s) {
    case strings::NetworkStability::ExponentiallyStable: return "exponentially_stable";
    case strings::NetworkStability::SemiUniformNotExponential:
      return "semi_uniformly_stable_not_exponentially_stable";
    case strings::NetworkStability::NotSemiUniformlyStable: return "not_semi_uniformly_stable";
    default: return "requires_assertion";
  }
}

const char* parity_name(strings::ParityClass c) {
  switch (c) {
    case strings::ParityClass::EvenOverOdd: return "even_over_odd";
    case strings::ParityClass::OddOverOdd: return "odd_over_odd";
    default: return "neither";
  }
}

ordered_json hit_to_json(const EigenHit& hit) {
  ordered_json h;
  h["omega"] = hit.omega;
  h["sigma_min"] = hit.sigma_min;
  h["boundary_residual"] = hit.boundary_residual;
  h["energy_residual"] = hit.energy_residual;
  ordered_json kernel = ordered_json::array();
  for (Eigen::Index i = 0; i < hit.kernel.size(); ++i) {
    kernel.push_back(ordered_json::array({hit.kernel(i).real(), hit.kernel(i).imag()}));
  }
  h["kernel"] = kernel;
  return h;
}

}  // namespace

SystemSpec system_from_json(const json& j) {
  SystemSpec spec;
  spec.n = static_cast<int>(number_at(j, "n"));
  spec.order = static_cast<int>(number_at(j, "N"));
  std::tie(spec.a, spec.b) = interval_from_json(j);

  if (!j.contains("P") || !j.at("P").is_array()) schema_error("expected P: array of matrices");
  for (size_t k = 0; k < j.at("P").size(); ++k) {
    spec.P.push_back(matrix_from_json(j.at("P")[k], "P[" + std::to_string(k) + "]"));
  }

  if (!j.contains("hamiltonian") || !j.at("hamiltonian").is_object()) {
    schema_error("expected hamiltonian: {breakpoints, values}");
  }
  const json& h = j.at("hamiltonian");
  if (!h.contains("breakpoints") || !h.at("breakpoints").is_array() || !h.contains("values") ||
      !h.at("values").is_array()) {
    schema_error("hamiltonian must carry breakpoints and values arrays");
  }
  for (const auto& bp : h.at("breakpoints")) {
    if (!bp.is_number()) schema_error("breakpoints must be numbers");
    spec.density.breakpoints.push_back(bp.get<double>());
  }
  for (size_t k = 0; k < h.at("values").size(); ++k) {
    spec.density.values.push_back(matrix_from_json(h.at("values")[k], "hamiltonian.values[" +
                                                                          std::to_string(k) + "]"));
  }
  if (!j.contains("W_B")) schema_error("expected W_B matrix");
  spec.boundary = matrix_from_json(j.at("W_B"), "W_B");
  return spec;
}

json system_to_json(const SystemSpec& spec) {
  json j;
  j["n"] = spec.n;
  j["N"] = spec.order;
  j["interval"] = {spec.a, spec.b};
  j["P"] = json::array();
  for (const CMatrix& p : spec.P) j["P"].push_back(matrix_to_json(p));
  j["hamiltonian"]["breakpoints"] = spec.density.breakpoints;
  j["hamiltonian"]["values"] = json::array();
  for (const CMatrix& h : spec.density.values) j["hamiltonian"]["values"].push_back(matrix_to_json(h));
  j["W_B"] = matrix_to_json(spec.boundary);
  return j;
}

StringsInput strings_from_json(const json& j, std::vector<Violation>* violations) {
  StringsInput in;
  auto triple = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 3) {
      schema_error(std::string("expected ") + key + ": array of 3 numbers");
    }
    std::array<double, 3> out{};
    for (int k = 0; k < 3; ++k) {
      if (!j.at(key)[k].is_number()) schema_error(std::string(key) + " entries must be numbers");
      out[k] = j.at(key)[k].get<double>();
    }
    return out;
  };
  in.params.rho = triple("rho");
  in.params.tension = triple("T");
  in.params.beta = number_at(j, "beta");
  std::tie(in.params.a, in.params.b) = interval_from_json(j);

  for (int k = 0; k < 3; ++k) {
    if (!(in.params.rho[k] > 0.0)) violations->push_back({"parameters", "rho must be positive"});
    if (!(in.params.tension[k] > 0.0)) violations->push_back({"parameters", "T must be positive"});
  }
  if (!(in.params.a < in.params.b)) violations->push_back({"interval", "interval must satisfy a < b"});

  in.speeds.independence_asserted =
      j.value("independence_asserted", false);

  const auto c_float = strings::speeds_from_params(in.params);
  for (int k = 0; k < 3; ++k) in.speeds.c[k] = strings::SpeedValue::irrational(c_float[k]);

  if (j.contains("speeds_exact")) {
    const json& se = j.at("speeds_exact");
    if (!se.is_array() || se.size() != 3) schema_error("speeds_exact must be [[p, q] x 3]");
    for (int k = 0; k < 3; ++k) {
      if (!se[k].is_array() || se[k].size() != 2 || !se[k][0].is_number_integer() ||
          !se[k][1].is_number_integer()) {
        schema_error("speeds_exact entries must be integer pairs [p, q]");
      }
      const long long p = se[k][0].get<long long>();
      const long long q = se[k][1].get<long long>();
      if (q == 0 || p <= 0 || q < 0) {
        violations->push_back({"speeds", "exact speeds must be positive rationals"});
        continue;
      }
      const strings::Rational r{strings::BigInt(p), strings::BigInt(q)};
      in.speeds.c[k] = strings::SpeedValue::from_rational(r);
      if (std::abs(r.to_double() - c_float[k]) > 1e-8 * std::max(1.0, r.to_double())) {
        violations->push_back(
            {"speeds", "speeds_exact[" + std::to_string(k) + "] disagrees with sqrt(rho/T)"});
      }
    }
  }
  return in;
}

LoadedInput load_input(const std::string& path, InputMode mode) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open input file: " + path, 0, 0);
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();

  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte);
    throw ParseError(e.what(), line, col);
  }
  if (!j.is_object()) throw ParseError("input must be a JSON object", 1, 1);

  LoadedInput out;
  const bool strings_mode =
      mode == InputMode::strings || (mode == InputMode::automatic && j.contains("rho"));
  if (strings_mode) {
    out.is_strings = true;
    out.strings_input = strings_from_json(j, &out.input_violations);
    if (out.input_violations.empty()) {
      out.spec = strings::build_string_network(out.strings_input->params);
    }
  } else {
    out.spec = system_from_json(j);
  }
  return out;
}

void write_scan_csv(const SpectralScan& scan, const std::vector<double>* eta_column,
                    const std::string& path) {
  std::ostringstream os;
  os << "omega,sigma_min,psi_norm";
  if (eta_column) os << ",eta";
  os << "\n";
  for (size_t i = 0; i < scan.omegas.size(); ++i) {
    os << fmt17(scan.omegas[i]) << ',' << fmt17(scan.sigma_mins[i]) << ','
       << fmt17(scan.psi_norms[i]);
    if (eta_column) os << ',' << fmt17((*eta_column)[i]);
    os << "\n";
  }
  write_text_atomic(path, os.str());
}

ordered_json report_to_json(const ReportBundle& bundle) {
  ordered_json rep;
  rep["schema"] = 1;
  rep["command"] = bundle.command;
  rep["mode"] = bundle.mode;

  ordered_json cfg;
  cfg["omega_max"] = bundle.omega_max;
  cfg["grid_points"] = bundle.grid_points;
  cfg["tol_sing"] = bundle.tol_sing;
  cfg["tol_inconclusive"] = bundle.tol_inconclusive;
  rep["config"] = cfg;

  if (bundle.strings_input) {
    const auto& si = *bundle.strings_input;
    ordered_json sj;
    sj["rho"] = si.params.rho;
    sj["T"] = si.params.tension;
    sj["beta"] = si.params.beta;
    sj["interval"] = {si.params.a, si.params.b};
    ordered_json speeds = ordered_json::array();
    for (const auto& sv : si.speeds.c) {
      if (sv.is_rational()) {
        speeds.push_back(sv.exact->str());
      } else {
        speeds.push_back(sv.value);
      }
    }
    sj["speeds"] = speeds;
    sj["independence_asserted"] = si.speeds.independence_asserted;
    rep["strings"] = sj;
  }

  ordered_json validation;
  validation["valid"] = bundle.violations.empty();
  ordered_json vlist = ordered_json::array();
  for (const Violation& v : bundle.violations) {
    vlist.push_back({{"code", v.code}, {"detail", v.detail}});
  }
  validation["violations"] = vlist;
  rep["validation"] = validation;

  if (bundle.generation) {
    ordered_json g;
    g["generates"] = bundle.generation->generates;
    g["marginal"] = bundle.generation->marginal;
    g["witness"] = bundle.generation->witness;
    rep["generation"] = g;
  }

  if (bundle.scan) {
    const SpectralScan& s = *bundle.scan;
    ordered_json sj;
    sj["omega_max"] = s.omega_max;
    sj["grid_points"] = static_cast<long>(s.omegas.size());
    sj["min_sigma"] = s.min_sigma;
    sj["argmin_omega"] = s.argmin_omega;
    sj["sup_psi_estimate"] = s.sup_psi_estimate;
    ordered_json hits = ordered_json::array();
    for (const EigenHit& h : s.hits) hits.push_back(hit_to_json(h));
    sj["hits"] = hits;
    sj["inconclusive"] = s.inconclusive;
    rep["scan"] = sj;
  }

  if (bundle.stability) {
    const StabilityReport& st = *bundle.stability;
    ordered_json sj;
    sj["asymptotic"] = asymptotic_name(st.asymptotic);
    sj["exponential"] = exponential_name(st.exponential);
    sj["omega_max"] = st.omega_max;
    sj["inf_sigma_min"] = st.inf_sigma_min;
    if (st.exact) {
      const auto& ex = *st.exact;
      ordered_json ej;
      ej["status"] = strings_status_name(ex.status);
      ordered_json ratios = ordered_json::array();
      static const char* names[3] = {"c_I/c_II", "c_I/c_III", "c_II/c_III"};
      for (int i = 0; i < 3; ++i) {
        const auto& rp = ex.ratios[i];
        ordered_json rj;
        rj["pair"] = names[i];
        if (rp.ratio) rj["ratio"] = rp.ratio->str();
        if (rp.cls) rj["parity"] = parity_name(*rp.cls);
        rj["obstruction"] = rp.obstruction;
        ratios.push_back(rj);
      }
      ej["ratios"] = ratios;
      if (ex.base_eigenfrequency) ej["base_eigenfrequency"] = *ex.base_eigenfrequency;
      if (!ex.eigenfrequencies.empty()) ej["eigenfrequencies"] = ex.eigenfrequencies;
      if (ex.period) ej["period"] = *ex.period;
      if (ex.min_eta_squared) ej["min_eta_squared"] = *ex.min_eta_squared;
      if (ex.min_eta_plain) ej["min_eta_plain"] = *ex.min_eta_plain;
      if (ex.argmin_omega) ej["argmin_omega"] = *ex.argmin_omega;
      ej["detail"] = ex.detail;
      sj["exact"] = ej;
    }
    sj["notes"] = st.notes;
    rep["stability"] = sj;
  }

  if (!bundle.notes.empty()) rep["notes"] = bundle.notes;
  return rep;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    if (!f.good()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace phstab::io
