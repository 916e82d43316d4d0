#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

namespace phstab::num {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// exp(A) for square complex A by Pade(13,13) with scaling and squaring.
/// Stays at full accuracy for norms up to ~1e3; throws std::invalid_argument
/// on non-square input.
CMatrix mat_exp(const CMatrix& a);

/// Smallest singular value of a square matrix (full SVD). Zero, up to
/// rounding, exactly when the matrix is singular.
double smallest_singular_value(const CMatrix& a);

/// Largest singular value (operator 2-norm).
double spectral_norm(const CMatrix& a);

/// Unit right singular vector belonging to the smallest singular value,
/// or nullopt when sigma_min exceeds tol. The phase is whatever the SVD
/// produces; callers comparing vectors should mod out a global phase.
std::optional<CVector> kernel_vector(const CMatrix& a, double tol);

/// Least eigenvalue of the Hermitian part (A + A*)/2.
double min_hermitian_eigenvalue(const CMatrix& a);

/// Positive semidefiniteness test: A must be Hermitian within
/// tol*(1 + ||A||_F) and every eigenvalue of (A + A*)/2 must be >= -tol.
bool is_psd(const CMatrix& a, double tol = 1e-9);

/// True when no entry is NaN or infinite.
bool all_finite(const CMatrix& a);

}  // namespace phstab::num
