#include "phstab/numkernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace phstab::num {

namespace {

void require_square(const CMatrix& a, const char* who) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square, got " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

double one_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

CMatrix mat_exp(const CMatrix& a) {
  require_square(a, "mat_exp");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;

  // Pade(13,13) numerator coefficients; the denominator uses the same
  // coefficients with alternating signs, giving the (V-U)x = (V+U) solve.
  static const double b[14] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm = one_norm(a);
  int squarings = 0;
  if (norm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
  }
  const CMatrix as = a / std::exp2(static_cast<double>(squarings));

  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = as * as;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a2 * a4;
  const CMatrix u =
      as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const CMatrix v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  CMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

double smallest_singular_value(const CMatrix& a) {
  require_square(a, "smallest_singular_value");
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(a.rows() - 1);
}

double spectral_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

std::optional<CVector> kernel_vector(const CMatrix& a, double tol) {
  require_square(a, "kernel_vector");
  if (tol <= 0.0) throw std::invalid_argument("kernel_vector: tol must be positive");
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const Eigen::Index n = a.rows();
  if (svd.singularValues()(n - 1) > tol) return std::nullopt;
  CVector v = svd.matrixV().col(n - 1);
  v.normalize();
  return v;
}

double min_hermitian_eigenvalue(const CMatrix& a) {
  require_square(a, "min_hermitian_eigenvalue");
  const CMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool is_psd(const CMatrix& a, double tol) {
  require_square(a, "is_psd");
  if (a.size() == 0) return true;
  const double asym = (a - a.adjoint()).norm();
  if (asym > tol * (1.0 + a.norm())) return false;
  return min_hermitian_eigenvalue(a) >= -tol;
}

bool all_finite(const CMatrix& a) { return a.allFinite(); }

}  // namespace phstab::num
