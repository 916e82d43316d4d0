#pragma once

#include <random>

#include "phstab/strings.hpp"
#include "phstab/system.hpp"

namespace phtest {

using phstab::CMatrix;
using phstab::Complex;
using phstab::CVector;
using phstab::SystemSpec;

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Complex random_complex(Rng& rng, double scale = 1.0) {
  return {uniform(rng, -scale, scale), uniform(rng, -scale, scale)};
}

inline CMatrix random_matrix(Rng& rng, int rows, int cols, double scale = 1.0) {
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = random_complex(rng, scale);
  return m;
}

inline CMatrix random_hermitian(Rng& rng, int n, double scale = 1.0) {
  const CMatrix m = random_matrix(rng, n, n, scale);
  return 0.5 * (m + m.adjoint());
}

inline CMatrix random_unitary(Rng& rng, int n) {
  const CMatrix m = random_matrix(rng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(m);
  CMatrix q = qr.householderQ();
  return q;
}

/// Hermitian with eigenvalues of magnitude in [lo, hi]; signs alternate so
/// the matrix is invertible but generally indefinite.
inline CMatrix random_hermitian_invertible(Rng& rng, int n, double lo = 0.5, double hi = 2.0) {
  const CMatrix u = random_unitary(rng, n);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    d(i) = uniform(rng, lo, hi) * (std::uniform_int_distribution<int>(0, 1)(rng) ? 1.0 : -1.0);
  }
  return u * d.asDiagonal() * u.adjoint();
}

/// Hermitian positive definite with spectrum in [floor, ceil].
inline CMatrix random_hpd(Rng& rng, int n, double floor = 0.5, double ceil = 2.0) {
  const CMatrix u = random_unitary(rng, n);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = uniform(rng, floor, ceil);
  return u * d.asDiagonal() * u.adjoint();
}

/// Random order-1 spec with P_0 = 0, Hermitian invertible P_1, piecewise-
/// constant positive H, and a full-row-rank boundary matrix.
inline SystemSpec random_order1_spec(Rng& rng, int n, int cells, double h_floor = 0.5,
                                     double h_ceil = 2.0) {
  SystemSpec spec;
  spec.n = n;
  spec.order = 1;
  spec.a = 0.0;
  spec.b = 1.0;
  spec.P = {CMatrix::Zero(n, n), random_hermitian_invertible(rng, n)};
  spec.density.breakpoints.push_back(0.0);
  for (int j = 1; j < cells; ++j) spec.density.breakpoints.push_back(j / double(cells));
  spec.density.breakpoints.push_back(1.0);
  for (int j = 0; j < cells; ++j) spec.density.values.push_back(random_hpd(rng, n, h_floor, h_ceil));
  CMatrix wb(n, 2 * n);
  wb.leftCols(n) = random_unitary(rng, n);
  wb.rightCols(n) = random_matrix(rng, n, n);
  spec.boundary = wb;
  return spec;
}

/// Three-string network with speeds c = sqrt(rho/T); T = 1, rho = c^2.
inline SystemSpec strings_spec(double c1, double c2, double c3, double beta = 1.0,
                               double a = 0.0, double b = 1.0) {
  phstab::strings::StringNetworkParams p;
  p.rho = {c1 * c1, c2 * c2, c3 * c3};
  p.tension = {1.0, 1.0, 1.0};
  p.beta = beta;
  p.a = a;
  p.b = b;
  return phstab::strings::build_string_network(p);
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Distance up to a global phase: min over |z|=1 of ||a - z b||.
inline double phase_distance(const CVector& a, const CVector& b) {
  const Complex inner = (b.adjoint() * a)(0, 0);
  const double mag = std::abs(inner);
  const Complex phase = mag > 0 ? inner / mag : Complex(1.0, 0.0);
  return (a - phase * b).norm();
}

}  // namespace phtest
