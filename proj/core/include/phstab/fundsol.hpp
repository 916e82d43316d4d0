#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "phstab/system.hpp"

namespace phstab {

/// Companion-form coefficient of the first-order system v' = F_lambda(zeta) v
/// equivalent to the order-N eigenvalue problem: identity blocks on the
/// superdiagonal and the block row
///   [lambda P_N^{-1} H(zeta)^{-1} - P_N^{-1} P_0, -P_N^{-1} P_1, ...,
///    -P_N^{-1} P_{N-1}]
/// at the bottom. For N = 1 this is lambda P_1^{-1} H^{-1} - P_1^{-1} P_0.
CMatrix build_companion(const SystemSpec& spec, Complex lambda, double zeta);

/// Per-cell lambda-affine decomposition of the companion field:
/// field(cell, lambda) = base[cell] + lambda * slope[cell]. Precomputing it
/// keeps frequency sweeps free of repeated small inversions.
struct CompanionCells {
  std::vector<double> breakpoints;
  std::vector<CMatrix> base;
  std::vector<CMatrix> slope;

  static CompanionCells build(const SystemSpec& spec);
  int cells() const { return static_cast<int>(base.size()); }
  CMatrix field(int cell, Complex lambda) const { return base[cell] + lambda * slope[cell]; }
};

enum class SolveMethod { piecewise_exp, picard };

struct FundamentalSolution {
  Complex lambda{0.0, 0.0};
  CMatrix value_at_b;
  /// Optional (zeta, Psi(zeta)) samples, increasing in zeta.
  std::vector<std::pair<double, CMatrix>> samples;
  SolveMethod method = SolveMethod::piecewise_exp;
  double est_error = 0.0;
};

struct PropagateOptions {
  bool keep_samples = false;            // record every internal node
  std::vector<double> sample_points;    // record exactly these zetas instead
  double max_step_norm = 20.0;          // split cells so ||field|| * dz stays below this
};

/// Psi_lambda(b) as the ordered product of per-cell matrix exponentials,
/// Psi_lambda(a) = I. Cells whose exponential argument would exceed
/// max_step_norm are subdivided, which keeps the exponentials in their
/// accurate regime at high frequencies.
FundamentalSolution propagate(const SystemSpec& spec, Complex lambda,
                              const PropagateOptions& opts = {});
FundamentalSolution propagate(const CompanionCells& cells, Complex lambda,
                              const PropagateOptions& opts = {});

struct PicardOptions {
  long grid_points = 10000;  // trapezoid nodes across [a, b]
  int max_iter = 400;
  double tol = 1e-12;        // successive-iterate sup distance
  bool keep_samples = false;
};

struct NonConvergenceError : std::runtime_error {
  NonConvergenceError(const std::string& msg, int iterations_, double last_delta_)
      : std::runtime_error(msg), iterations(iterations_), last_delta(last_delta_) {}
  int iterations;
  double last_delta;
};

/// Independent fixed-point solver for the same fundamental solution: iterates
/// u -> u(a) + int_a^zeta F_lambda u on a trapezoidal grid (all columns
/// advanced together) until the successive-iterate sup distance drops below
/// tol. Throws NonConvergenceError when max_iter is exhausted.
FundamentalSolution picard_fundamental(const SystemSpec& spec, Complex lambda,
                                       const PicardOptions& opts = {});

/// sup_zeta ||Psi^A(zeta) - Psi^B(zeta)||_F over the merged cell boundaries
/// and segment midpoints of two systems with identical shape and interval.
double continuity_gap(const SystemSpec& a, const SystemSpec& b, Complex lambda);

}  // namespace phstab
