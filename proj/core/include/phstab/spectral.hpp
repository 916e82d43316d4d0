#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "phstab/fundsol.hpp"
#include "phstab/generation.hpp"
#include "phstab/strings.hpp"

namespace phstab {

/// Boundary test matrix Q(lambda) = W_B [Psi_lambda(b); I], nN x nN.
/// lambda is an eigenvalue of the operator exactly when it is singular.
struct BoundaryTestMatrix {
  Complex lambda{0.0, 0.0};
  CMatrix q_of_lambda;
};

BoundaryTestMatrix boundary_test_matrix(const SystemSpec& spec, Complex lambda);

/// Certified imaginary-axis eigenvalue: sigma_min(Q(i omega)) below the
/// certification tolerance, with the kernel vector and its residuals.
struct EigenHit {
  double omega = 0.0;
  double sigma_min = 0.0;
  CVector kernel;
  double boundary_residual = 0.0;
  double energy_residual = 0.0;
};

struct SpectralScan {
  std::vector<double> omegas;
  std::vector<double> sigma_mins;
  std::vector<double> psi_norms;
  std::vector<EigenHit> hits;
  std::vector<double> inconclusive;  // refined minima in [tol_sing, tol_inconclusive)
  double omega_max = 0.0;
  double sup_psi_estimate = 0.0;
  double min_sigma = std::numeric_limits<double>::infinity();
  double argmin_omega = 0.0;
};

struct ScanOptions {
  double omega_max = 50.0;
  long grid_points = 200001;
  double tol_sing = 1e-10;          // refined minima below this certify an eigenvalue
  double tol_inconclusive = 1e-6;   // refined minima below this stay inconclusive
  int workers = 1;
};

/// sigma_min(Q(i omega)) and ||Psi_{i omega}(b)|| on a uniform grid over
/// [-omega_max, omega_max] (the single point 0 when omega_max is 0).
/// Deterministic for any worker count.
SpectralScan sigma_min_scan(const SystemSpec& spec, double omega_max, long grid_points,
                            int workers = 1);

/// Scan plus bracketed golden-section refinement of every grid-local
/// minimum down to width 1e-12 in omega. Refined minima below tol_sing
/// become certified hits with kernel vectors and residuals; minima in
/// [tol_sing, tol_inconclusive) are reported as inconclusive.
SpectralScan scan_imaginary_axis(const SystemSpec& spec, const ScanOptions& opts);

/// The hits of scan_imaginary_axis.
std::vector<EigenHit> find_imaginary_eigenvalues(const SystemSpec& spec, const ScanOptions& opts);

struct EigenpairCheck {
  double boundary_residual = 0.0;  // ||W_B [Psi(b) v; v]||
  double energy_residual = 0.0;    // |v^* (Psi(b)^* Q Psi(b) - Q) v|
  GridFunction eigenfunction;      // x = H^{-1} v_1 sampled on the cell grid
};

/// Residuals of a claimed eigenpair (i omega, v_a) and the reconstructed
/// eigenfunction. v_a is normalised before testing.
EigenpairCheck verify_eigenpair(const SystemSpec& spec, double omega, const CVector& v_a);

enum class AsymptoticVerdict { StableCertified, Unstable, Inconclusive, NotAssessed };
enum class ExponentialVerdict { NoObstruction, Obstructed, Exact, NotAssessed };

/// Combined verdicts. Scan-based results certify a compact window only;
/// the exact strings classification, when present, supplies unbounded-
/// frequency verdicts.
struct StabilityReport {
  GenerationVerdict generation;
  AsymptoticVerdict asymptotic = AsymptoticVerdict::NotAssessed;
  ExponentialVerdict exponential = ExponentialVerdict::NotAssessed;
  std::vector<EigenHit> hits;
  std::vector<double> inconclusive;
  double omega_max = 0.0;
  double inf_sigma_min = std::numeric_limits<double>::infinity();
  double sup_psi_estimate = 0.0;
  std::optional<strings::ExactClassification> exact;
  std::vector<std::string> notes;
};

/// Assemble verdicts from an existing scan (no recomputation).
StabilityReport assemble_report(const SpectralScan& scan, const ScanOptions& opts,
                                const GenerationVerdict& generation,
                                const std::optional<strings::ExactClassification>& exact);

/// Generation gate first: when the contraction test fails the report stops
/// there. Otherwise scan, refine, and classify; an exact strings
/// classification (constant-coefficient networks) overrides the heuristic
/// exponential judgement.
StabilityReport classify(const SystemSpec& spec, const ScanOptions& opts,
                         const std::optional<strings::ExactClassification>& exact = {});

}  // namespace phstab
