#include "phstab/strings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "minimize.hpp"

namespace phstab::strings {

namespace {

constexpr double kPi = std::numbers::pi;

using boost::multiprecision::abs;
using boost::multiprecision::gcd;
using boost::multiprecision::lcm;

std::array<double, 3> trig_factors(const Speeds& speeds, double omega, double length) {
  return {std::sin(speeds.c[0].value * omega * length),
          std::cos(speeds.c[1].value * omega * length),
          std::cos(speeds.c[2].value * omega * length)};
}

}  // namespace

SystemSpec build_string_network(const StringNetworkParams& params) {
  for (int k = 0; k < 3; ++k) {
    if (!(params.rho[k] > 0.0) || !(params.tension[k] > 0.0)) {
      throw std::invalid_argument("build_string_network: rho and tension must be positive");
    }
  }
  if (!(params.a < params.b)) {
    throw std::invalid_argument("build_string_network: interval must satisfy a < b");
  }

  SystemSpec spec;
  spec.n = 6;
  spec.order = 1;
  spec.a = params.a;
  spec.b = params.b;

  CMatrix p1 = CMatrix::Zero(6, 6);
  CMatrix h = CMatrix::Zero(6, 6);
  for (int k = 0; k < 3; ++k) {
    p1(2 * k, 2 * k + 1) = 1.0;
    p1(2 * k + 1, 2 * k) = 1.0;
    h(2 * k, 2 * k) = 1.0 / params.rho[k];
    h(2 * k + 1, 2 * k + 1) = params.tension[k];
  }
  spec.P = {CMatrix::Zero(6, 6), p1};
  spec.density = HamiltonianDensity::constant(h, params.a, params.b);

  // Boundary trace is [(Hx)(b); (Hx)(a)] with per-string components
  // (velocity, force). Rows: velocity continuity I=II, I=III at b; damper
  // force balance at b; fixed velocity of I at a; free ends of II, III at a.
  CMatrix wb = CMatrix::Zero(6, 12);
  wb(0, 0) = 1.0;
  wb(0, 2) = -1.0;
  wb(1, 0) = 1.0;
  wb(1, 4) = -1.0;
  wb(2, 0) = params.beta;
  wb(2, 1) = 1.0;
  wb(2, 3) = 1.0;
  wb(2, 5) = 1.0;
  wb(3, 6) = 1.0;
  wb(4, 9) = 1.0;
  wb(5, 11) = 1.0;
  spec.boundary = wb;
  return spec;
}

std::array<double, 3> speeds_from_params(const StringNetworkParams& params) {
  return {std::sqrt(params.rho[0] / params.tension[0]),
          std::sqrt(params.rho[1] / params.tension[1]),
          std::sqrt(params.rho[2] / params.tension[2])};
}

CMatrix closed_form_psi(double c, double rho, double omega, double zeta_minus_a) {
  if (!(c > 0.0) || !(rho > 0.0)) {
    throw std::invalid_argument("closed_form_psi: c and rho must be positive");
  }
  const double tension = rho / (c * c);
  const double arg = c * omega * zeta_minus_a;
  const double cs = std::cos(arg);
  const double sn = std::sin(arg);
  CMatrix psi(2, 2);
  psi(0, 0) = cs;
  psi(0, 1) = Complex(0.0, c / rho) * sn;
  psi(1, 0) = Complex(0.0, c * tension) * sn;
  psi(1, 1) = cs;
  return psi;
}

Speeds Speeds::rational(const Rational& c1, const Rational& c2, const Rational& c3) {
  Speeds s;
  s.c = {SpeedValue::from_rational(c1), SpeedValue::from_rational(c2),
         SpeedValue::from_rational(c3)};
  return s;
}

double eta_plain(const Speeds& speeds, double omega, double length) {
  const auto [f0, f1, f2] = trig_factors(speeds, omega, length);
  return std::abs(f0 * f1) + std::abs(f0 * f2) + std::abs(f1 * f2);
}

double eta_squared(const Speeds& speeds, double omega, double length) {
  const auto [f0, f1, f2] = trig_factors(speeds, omega, length);
  const double a = f0 * f1, b = f0 * f2, c = f1 * f2;
  return a * a + b * b + c * c;
}

ParityClass parity_class(const Rational& r) {
  const BigInt p = abs(r.num());
  const BigInt q = r.den();
  if (p % 2 == 0) return ParityClass::EvenOverOdd;  // q odd since gcd(p, q) = 1
  if (q % 2 == 1) return ParityClass::OddOverOdd;
  return ParityClass::Neither;
}

double eta_period(const Speeds& speeds, double length) {
  if (!speeds.all_rational()) {
    throw std::invalid_argument("eta_period: all speeds must be exact rationals");
  }
  if (!(length > 0.0)) throw std::invalid_argument("eta_period: length must be positive");
  BigInt t = 1;
  for (const SpeedValue& sv : speeds.c) t = lcm(t, sv.exact->den());
  return 2.0 * kPi * t.convert_to<double>() / length;
}

EtaScan min_eta(const Speeds& speeds, double length, double lo, double hi, long grid_points,
                bool squared, int refine_top, bool seed_factor_zeros) {
  if (!(hi > lo) || grid_points < 2) {
    throw std::invalid_argument("min_eta: need hi > lo and grid_points >= 2");
  }
  auto eval = [&](double w) {
    return squared ? eta_squared(speeds, w, length) : eta_plain(speeds, w, length);
  };

  EtaScan out;
  out.min_value = std::numeric_limits<double>::infinity();

  const double step = (hi - lo) / static_cast<double>(grid_points - 1);
  std::vector<double> vals(grid_points);
  for (long i = 0; i < grid_points; ++i) {
    const double w = (i == grid_points - 1) ? hi : lo + step * static_cast<double>(i);
    vals[i] = eval(w);
    if (vals[i] < out.min_value) {
      out.min_value = vals[i];
      out.argmin = w;
    }
  }
  out.evaluations += grid_points;

  // candidate brackets: grid-local minima, best first
  struct Candidate {
    double value;
    double lo, hi;
  };
  std::vector<Candidate> cands;
  for (long i = 1; i + 1 < grid_points; ++i) {
    if (vals[i] < vals[i - 1] && vals[i] <= vals[i + 1]) {
      cands.push_back({vals[i], lo + step * static_cast<double>(i - 1),
                       lo + step * static_cast<double>(i + 1)});
    }
  }

  if (seed_factor_zeros) {
    double cmax = 0.0;
    for (const SpeedValue& sv : speeds.c) cmax = std::max(cmax, sv.value);
    const double basin = 0.45 * kPi / (cmax * length);
    auto seed = [&](double coeff, double offset) {
      // zeros of the factor at w = (m + offset) * pi / (coeff * length)
      const double unit = kPi / (coeff * length);
      long m_lo = static_cast<long>(std::floor(lo / unit - offset)) - 1;
      long m_hi = static_cast<long>(std::ceil(hi / unit - offset)) + 1;
      const long count = m_hi - m_lo + 1;
      const long stride = std::max<long>(1, count / 4000000);
      for (long m = m_lo; m <= m_hi; m += stride) {
        const double w = (static_cast<double>(m) + offset) * unit;
        if (w < lo || w > hi) continue;
        const double v = eval(w);
        ++out.evaluations;
        if (v < out.min_value) {
          out.min_value = v;
          out.argmin = w;
        }
        cands.push_back({v, std::max(lo, w - basin), std::min(hi, w + basin)});
      }
    };
    seed(speeds.c[0].value, 0.0);
    seed(speeds.c[1].value, 0.5);
    seed(speeds.c[2].value, 0.5);
  }

  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.lo < b.lo;
  });
  const long n_refine = std::min<long>(refine_top, static_cast<long>(cands.size()));
  for (long i = 0; i < n_refine; ++i) {
    const double xtol = std::max(1e-12, 8.0 * std::abs(cands[i].hi) * 1e-16);
    auto counted = [&](double w) {
      ++out.evaluations;
      return eval(w);
    };
    const auto [x, fx] = detail::golden_min(counted, cands[i].lo, cands[i].hi, xtol);
    if (fx < out.min_value) {
      out.min_value = fx;
      out.argmin = x;
    }
  }
  return out;
}

ExactClassification classify_constant_strings(const Speeds& speeds, double length) {
  if (!(length > 0.0)) {
    throw std::invalid_argument("classify_constant_strings: length must be positive");
  }
  ExactClassification out;
  out.ratios[0] = {0, 1, std::nullopt, std::nullopt, false};
  out.ratios[1] = {0, 2, std::nullopt, std::nullopt, false};
  out.ratios[2] = {1, 2, std::nullopt, std::nullopt, false};

  for (int i = 0; i < 3; ++i) {
    RatioParity& rp = out.ratios[i];
    const SpeedValue& num = speeds.c[rp.lhs];
    const SpeedValue& den = speeds.c[rp.rhs];
    if (!num.is_rational() || !den.is_rational()) continue;
    rp.ratio = *num.exact / *den.exact;
    rp.cls = parity_class(*rp.ratio);
    const ParityClass bad = (i < 2) ? ParityClass::EvenOverOdd : ParityClass::OddOverOdd;
    rp.obstruction = (*rp.cls == bad);
  }

  const auto obstructed = std::find_if(out.ratios.begin(), out.ratios.end(),
                                       [](const RatioParity& rp) { return rp.obstruction; });
  static const char* kNames[3] = {"c_I/c_II", "c_I/c_III", "c_II/c_III"};

  if (obstructed != out.ratios.end()) {
    out.status = NetworkStability::NotSemiUniformlyStable;
    const RatioParity& rp = *obstructed;
    // Frequency where both trig factors of the obstructed pair vanish:
    // odd multiples of pi * num(ratio) / (2 c_lhs length).
    const Rational coeff = Rational(rp.ratio->num(), 2) / *speeds.c[rp.lhs].exact;
    const double base = kPi * coeff.to_double() / length;
    out.base_eigenfrequency = base;
    for (int j = 0; j < 5; ++j) out.eigenfrequencies.push_back(base * (2 * j + 1));
    if (speeds.all_rational()) {
      out.period = eta_period(speeds, length);
      out.min_eta_squared = 0.0;
      out.min_eta_plain = 0.0;
      out.argmin_omega = base;
    }
    const char* name = kNames[obstructed - out.ratios.begin()];
    const char* cls = rp.cls == ParityClass::EvenOverOdd ? "even/odd" : "odd/odd";
    out.detail = std::string(name) + " = " + rp.ratio->str() + " lies in the " + cls +
                 " class: infinitely many imaginary-axis eigenvalues, not semi-uniformly stable";
    return out;
  }

  if (speeds.all_rational()) {
    out.status = NetworkStability::ExponentiallyStable;
    out.period = eta_period(speeds, length);
    const EtaScan sq = min_eta(speeds, length, 0.0, *out.period, 100000, true, 10);
    const EtaScan pl = min_eta(speeds, length, 0.0, *out.period, 100000, false, 10);
    out.min_eta_squared = sq.min_value;
    out.min_eta_plain = pl.min_value;
    out.argmin_omega = sq.argmin;
    out.detail =
        "all speed ratios avoid the even/odd and odd/odd obstruction classes; eta is periodic "
        "with positive minimum, so the semigroup is exponentially stable";
    return out;
  }

  if (speeds.independence_asserted) {
    out.status = NetworkStability::SemiUniformNotExponential;
    out.detail =
        "asserted pairwise independence: no speed ratio lies in an obstruction class, so the "
        "semigroup is semi-uniformly stable; along unbounded frequency sequences the transfer "
        "products still approach zero, so it is not exponentially stable";
    return out;
  }

  out.status = NetworkStability::RequiresAssertion;
  out.detail =
      "speeds with irrational members cannot be classified exactly without an independence "
      "assertion";
  return out;
}

DependenceWitness rational_dependence(const Rational& x, const Rational& y) {
  const BigInt p1 = abs(x.num());
  const BigInt q1 = x.den();
  const BigInt p2 = abs(y.num());
  const BigInt q2 = y.den();
  const BigInt modulus = q1 * q2;
  const BigInt a = (p2 * q1) % modulus;

  for (BigInt k = 1; k <= q1; ++k) {
    const BigInt b = (k * p1 * q2) % modulus;
    const BigInt g = a == 0 ? modulus : gcd(a, modulus);
    if (b % g != 0) continue;
    const BigInt m2 = modulus / g;
    BigInt n;
    if (m2 == 1) {
      n = 1;
    } else {
      const BigInt a2 = a / g;
      const BigInt b2 = (b / g) % m2;
      n = (b2 * mod_inverse(a2, m2)) % m2;
      if (n == 0) n = m2;
    }
    return {k, n};
  }
  throw std::logic_error("rational_dependence: unreachable (k = den(x) always admits a witness)");
}

}  // namespace phstab::strings
