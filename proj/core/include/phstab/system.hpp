#pragma once

#include <functional>
#include <string>
#include <vector>

#include "phstab/numkernel.hpp"

namespace phstab {

using num::CMatrix;
using num::Complex;
using num::CVector;

/// Numeric slack used by validators and structure builders. The defaults
/// follow the usual split: entrywise symmetry checks at 1e-12, derived
/// consistency checks (inverses, block patterns) at 1e-10.
struct Tolerances {
  double entrywise = 1e-12;
  double invertibility = 1e-12;
  double coercivity = 1e-12;
  double consistency = 1e-10;
};

/// Piecewise-constant Hermitian coefficient H(zeta) on [a, b]:
/// values[j] holds on [breakpoints[j], breakpoints[j+1]).
struct HamiltonianDensity {
  std::vector<double> breakpoints;
  std::vector<CMatrix> values;

  static HamiltonianDensity constant(const CMatrix& h, double a, double b);
  /// Midpoint-sample an arbitrary coefficient onto a uniform mesh of
  /// `cells` cells; the induced fundamental solutions converge to the
  /// exact ones as the mesh refines.
  static HamiltonianDensity sampled(const std::function<CMatrix(double)>& h, double a, double b,
                                    int cells);

  int cells() const { return static_cast<int>(values.size()); }
  double a() const { return breakpoints.front(); }
  double b() const { return breakpoints.back(); }
  int cell_index(double zeta) const;
  const CMatrix& at(double zeta) const { return values[cell_index(zeta)]; }

  /// Least eigenvalue of the Hermitian parts across all cells.
  double coercivity_floor() const;
  /// Largest cell spectral norm.
  double sup_norm() const;
};

/// Boundary-value description of
///   d/dt x = sum_{k=0..N} P_k d^k/dzeta^k (H(zeta) x)
/// on (a, b) with W_B [trace at b; trace at a] = 0, where the trace stacks
/// H x and its first N-1 spatial derivatives.
struct SystemSpec {
  int n = 0;      // state dimension
  int order = 0;  // highest spatial derivative order N
  double a = 0.0;
  double b = 1.0;
  std::vector<CMatrix> P;      // P_0 .. P_N, each n x n
  HamiltonianDensity density;  // H
  CMatrix boundary;            // W_B, (n*order) x (2*n*order)

  int block_dim() const { return n * order; }
};

struct Violation {
  std::string code;
  std::string detail;
};

/// Check every standing structural assumption: P_k^* = (-1)^{k+1} P_k,
/// P_N invertible, H Hermitian and coercive, W_B of full row rank, shapes
/// and interval sanity. Violations are data, not exceptions; an empty
/// report means the spec is admissible.
std::vector<Violation> validate_system(const SystemSpec& spec, const Tolerances& tol = {});

bool is_valid(const SystemSpec& spec, const Tolerances& tol = {});

/// Throws std::invalid_argument listing the violations when invalid.
void require_valid(const SystemSpec& spec, const Tolerances& tol = {});

/// Structure matrix Q (nN x nN): block (i, j), 1-based, equals
/// (-1)^{i-1} P_{i+j-1} when i+j-1 <= N and vanishes otherwise.
/// Hermitian as a consequence of the P_k symmetries.
CMatrix build_q(const SystemSpec& spec);

struct StructureMatrices {
  CMatrix q;
  CMatrix r_ext;
  CMatrix r_ext_inv;
};

/// R_ext = (1/sqrt 2) [[Q, -Q], [I, I]] together with its verified inverse
/// (1/sqrt 2) [[Q^{-1}, I], [-Q^{-1}, I]].
StructureMatrices build_r_ext(const SystemSpec& spec, const Tolerances& tol = {});

/// Vector-valued samples on an increasing zeta grid.
struct GridFunction {
  std::vector<double> grid;
  std::vector<CVector> values;
};

/// (1/2) * integral of g^* H f over (a, b) by per-cell midpoint quadrature
/// with linear interpolation of f and g. The common grid must contain every
/// breakpoint of H; mismatched grids raise std::invalid_argument.
Complex energy_inner_product(const GridFunction& f, const GridFunction& g,
                             const HamiltonianDensity& h);

}  // namespace phstab
