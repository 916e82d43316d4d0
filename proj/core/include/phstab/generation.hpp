#pragma once

#include "phstab/system.hpp"

namespace phstab {

/// Outcome of the contraction-generator test.
struct GenerationVerdict {
  bool generates = false;
  bool marginal = false;  // witness in [-tol, 0): accepted, but borderline
  double witness = 0.0;   // least eigenvalue of the Hermitian test matrix
  CMatrix test_matrix;
};

/// M = (W_B R_ext^{-1}) [[0, I], [I, 0]] (W_B R_ext^{-1})^*, an nN x nN
/// Hermitian matrix. The operator generates a contraction semigroup exactly
/// when M is positive semidefinite.
CMatrix generation_matrix(const SystemSpec& spec);

/// PSD test on generation_matrix with slack tol on the least eigenvalue.
GenerationVerdict check_contraction_generator(const SystemSpec& spec, double tol = 1e-9);

}  // namespace phstab
