#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "phstab/rational.hpp"
#include "phstab/system.hpp"

namespace phstab::strings {

/// Physical parameters of the three-string star: strings I, II, III share
/// the interval (a, b), meet at zeta = b and carry one damper there.
struct StringNetworkParams {
  std::array<double, 3> rho{1.0, 1.0, 1.0};      // mass density per string
  std::array<double, 3> tension{1.0, 1.0, 1.0};  // tension per string
  double beta = 1.0;                             // damper coefficient
  double a = 0.0;
  double b = 1.0;
};

/// Port-Hamiltonian spec of the network: n = 6, N = 1,
/// P_1 = blockdiag([[0,1],[1,0]] x 3), H = blockdiag(diag(1/rho_k, T_k)),
/// and the 6 x 12 boundary matrix coupling the strings at b (velocity
/// continuity, damper force balance) and fixing string I / freeing the
/// other ends at a. Throws std::invalid_argument on non-positive rho or T;
/// beta may take any value so that sign experiments stay expressible.
SystemSpec build_string_network(const StringNetworkParams& params);

/// Inverse wave speeds c_k = sqrt(rho_k / T_k).
std::array<double, 3> speeds_from_params(const StringNetworkParams& params);

/// 2x2 transfer matrix across one constant-coefficient string,
///   [[cos(c w s), (i c / rho) sin(c w s)],
///    [i c T sin(c w s), cos(c w s)]],  T = rho / c^2,  s = zeta - a.
/// Unit determinant for every input.
CMatrix closed_form_psi(double c, double rho, double omega, double zeta_minus_a);

/// One inverse wave speed: exact p/q when known, otherwise a floating
/// value whose arithmetic relations are never inferred from the double.
struct SpeedValue {
  double value = 1.0;
  std::optional<Rational> exact;

  static SpeedValue from_rational(const Rational& r) { return {r.to_double(), r}; }
  static SpeedValue irrational(double v) { return {v, std::nullopt}; }
  bool is_rational() const { return exact.has_value(); }
};

struct Speeds {
  std::array<SpeedValue, 3> c;
  /// User assertion that the triple is pairwise independent in the
  /// Z-module R/Z (no k c_i - n c_j in Z besides k = n = 0). Never
  /// derived from the floating values.
  bool independence_asserted = false;

  static Speeds rational(const Rational& c1, const Rational& c2, const Rational& c3);
  bool all_rational() const {
    return c[0].is_rational() && c[1].is_rational() && c[2].is_rational();
  }
};

/// Transfer-entry products that decide stability: with
/// sI = sin(c_I w L), cII = cos(c_II w L), cIII = cos(c_III w L),
/// plain form |sI cII| + |sI cIII| + |cII cIII| and squared form with each
/// modulus squared. The two conventions share the same zero set.
double eta_plain(const Speeds& speeds, double omega, double length);
double eta_squared(const Speeds& speeds, double omega, double length);

enum class ParityClass { EvenOverOdd, OddOverOdd, Neither };

/// Parity of a lowest-terms rational: even/odd, odd/odd, or neither
/// (odd/even). Signs are ignored; both parity families are symmetric
/// under negation.
ParityClass parity_class(const Rational& r);

/// Common period in omega of the eta factors for all-rational speeds:
/// 2 pi lcm(denominators) / length.
double eta_period(const Speeds& speeds, double length);

struct EtaScan {
  double min_value = 0.0;
  double argmin = 0.0;
  long evaluations = 0;
};

/// Grid minimum of eta over [lo, hi] plus golden-section refinement of the
/// best refine_top local minima. With seed_factor_zeros the candidate set
/// additionally contains every zero of each individual trig factor in the
/// window, which keeps wide-window evidence scans from being grid-limited
/// to the wrong basins.
EtaScan min_eta(const Speeds& speeds, double length, double lo, double hi, long grid_points,
                bool squared, int refine_top = 10, bool seed_factor_zeros = false);

enum class NetworkStability {
  ExponentiallyStable,
  SemiUniformNotExponential,
  NotSemiUniformlyStable,
  RequiresAssertion,
};

struct RatioParity {
  int lhs = 0;
  int rhs = 1;                     // the ratio is c[lhs] / c[rhs]
  std::optional<Rational> ratio;   // absent when either side is irrational
  std::optional<ParityClass> cls;
  bool obstruction = false;        // ratio lies in the bad class for this pair
};

struct ExactClassification {
  NetworkStability status = NetworkStability::RequiresAssertion;
  std::array<RatioParity, 3> ratios{};
  /// Unstable case: the eigenfrequency family is base * (1, 3, 5, ...).
  std::optional<double> base_eigenfrequency;
  std::vector<double> eigenfrequencies;
  /// All-rational case: period of eta and its minimum over one period.
  std::optional<double> period;
  std::optional<double> min_eta_squared;
  std::optional<double> min_eta_plain;
  std::optional<double> argmin_omega;
  std::string detail;
};

/// Exact stability of the constant-coefficient network. Rational speeds are
/// decided by parity arithmetic: instability iff c_I/c_II or c_I/c_III is
/// even/odd or c_II/c_III is odd/odd. All-rational stable triples are
/// exponentially stable (eta is periodic with a positive minimum, reported
/// as margin). Triples with irrational members are decided only under the
/// independence assertion: semi-uniformly but not exponentially stable.
ExactClassification classify_constant_strings(const Speeds& speeds, double length);

struct DependenceWitness {
  BigInt k;
  BigInt n;
};

/// Minimal positive witness (k, n) with k x - n y an integer; rationals are
/// always dependent in the Z-module R/Z. Minimality is lexicographic: the
/// least k >= 1 admitting a solution, then the least n >= 1 for that k.
DependenceWitness rational_dependence(const Rational& x, const Rational& y);

}  // namespace phstab::strings
