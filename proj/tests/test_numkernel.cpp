#include <doctest.h>

#include <numbers>

#include "phstab/numkernel.hpp"
#include "support.hpp"

using namespace phstab;
using num::CMatrix;
using num::Complex;
using num::CVector;

namespace {

// independent oracle: truncated exponential series
CMatrix exp_series(const CMatrix& a, int terms) {
  CMatrix sum = CMatrix::Identity(a.rows(), a.cols());
  CMatrix term = sum;
  for (int k = 1; k <= terms; ++k) {
    term = term * a / double(k);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_SUITE("numkernel") {

TEST_CASE("mat_exp: zero matrix gives identity") {
  const CMatrix z = CMatrix::Zero(2, 2);
  CHECK(phtest::max_abs_diff(num::mat_exp(z), CMatrix::Identity(2, 2)) == 0.0);
}

TEST_CASE("mat_exp: diagonal imaginary arguments") {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = Complex(0.0, std::numbers::pi);
  CMatrix expected = CMatrix::Identity(2, 2);
  expected(0, 0) = -1.0;
  CHECK(phtest::max_abs_diff(num::mat_exp(a), expected) < 1e-14);
}

TEST_CASE("mat_exp: rotation generator matches the series oracle") {
  const double omega = 1.0;
  CMatrix a(2, 2);
  a << 0.0, omega, -omega, 0.0;
  const CMatrix oracle = exp_series(a, 20);
  CHECK(phtest::max_abs_diff(num::mat_exp(a), oracle) < 1e-13);
  // and the closed form
  CMatrix closed(2, 2);
  closed << std::cos(omega), std::sin(omega), -std::sin(omega), std::cos(omega);
  CHECK(phtest::max_abs_diff(num::mat_exp(a), closed) < 1e-13);
}

TEST_CASE("mat_exp: inverse identity exp(A) exp(-A) = I on random matrices") {
  phtest::Rng rng(101);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + int(rep % 5);
    CMatrix a = phtest::random_matrix(rng, n, n, 2.0);
    const double norm = a.norm();
    if (norm > 10.0) a *= 10.0 / norm;
    const CMatrix prod = num::mat_exp(a) * num::mat_exp(CMatrix(-a));
    CHECK(phtest::max_abs_diff(prod, CMatrix::Identity(n, n)) < 1e-10);
  }
}

TEST_CASE("mat_exp: accuracy holds near the large-norm end of the contract") {
  CMatrix a(2, 2);
  a << Complex(0, 1000.0), 0.0, 0.0, Complex(0, -1.0);
  CMatrix expected(2, 2);
  expected << Complex(std::cos(1000.0), std::sin(1000.0)), 0.0, 0.0,
      Complex(std::cos(1.0), -std::sin(1.0));
  CHECK(phtest::max_abs_diff(num::mat_exp(a), expected) < 1e-12);
}

TEST_CASE("mat_exp rejects non-square input") {
  CHECK_THROWS_AS(num::mat_exp(CMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("smallest_singular_value: identity and singular diagonal") {
  CHECK(num::smallest_singular_value(CMatrix::Identity(3, 3)) == doctest::Approx(1.0));
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 2.0;
  CHECK(num::smallest_singular_value(d) == doctest::Approx(0.0));
}

TEST_CASE("smallest_singular_value: 2x2 shear against the hand oracle") {
  // A = [[1,1],[0,1]]: A*A has eigenvalues (3 +- sqrt 5)/2
  CMatrix a(2, 2);
  a << 1.0, 1.0, 0.0, 1.0;
  const double expected = std::sqrt((3.0 - std::sqrt(5.0)) / 2.0);
  CHECK(num::smallest_singular_value(a) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("smallest_singular_value is unitarily invariant") {
  phtest::Rng rng(202);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 2 + rep % 4;
    const CMatrix a = phtest::random_matrix(rng, n, n);
    const CMatrix u = phtest::random_unitary(rng, n);
    const CMatrix v = phtest::random_unitary(rng, n);
    const double s1 = num::smallest_singular_value(a);
    const double s2 = num::smallest_singular_value(CMatrix(u * a * v));
    CHECK(std::abs(s1 - s2) < 1e-10);
  }
}

TEST_CASE("kernel_vector: diagonal, identity, and rank-one cases") {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  auto v = num::kernel_vector(d, 1e-10);
  REQUIRE(v.has_value());
  CVector expected(2);
  expected << 0.0, 1.0;
  CHECK(phtest::phase_distance(*v, expected) < 1e-12);

  CHECK_FALSE(num::kernel_vector(CMatrix::Identity(2, 2), 1e-10).has_value());

  CMatrix r(2, 2);
  r << 1.0, -1.0, 1.0, -1.0;
  auto w = num::kernel_vector(r, 1e-10);
  REQUIRE(w.has_value());
  CVector ker(2);
  ker << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(phtest::phase_distance(*w, ker) < 1e-12);
}

TEST_CASE("kernel_vector residual bound ||A v|| <= 2 sigma_min + tol") {
  phtest::Rng rng(303);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 3 + rep % 3;
    CMatrix a = phtest::random_matrix(rng, n, n);
    a.col(0) = a.col(1) * phtest::random_complex(rng);  // force near-singularity
    const double tol = 1e-6;
    const double smin = num::smallest_singular_value(a);
    auto v = num::kernel_vector(a, std::max(tol, 2 * smin));
    REQUIRE(v.has_value());
    CHECK((a * *v).norm() <= 2 * smin + tol);
  }
}

TEST_CASE("is_psd: diagonal cases and the damper test matrix") {
  CMatrix ok = CMatrix::Zero(3, 3);
  ok(2, 2) = 2.0;
  CHECK(num::is_psd(ok, 1e-9));

  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = 1.0;
  bad(1, 1) = -1e-3;
  CHECK_FALSE(num::is_psd(bad, 1e-9));

  // single damper entry 2*beta at (3,3), beta = 1
  CMatrix damper = CMatrix::Zero(6, 6);
  damper(2, 2) = 2.0;
  CHECK(num::is_psd(damper, 1e-9));
}

TEST_CASE("is_psd rejects non-Hermitian input") {
  CMatrix a(2, 2);
  a << 1.0, 1.0, 0.0, 1.0;
  CHECK_FALSE(num::is_psd(a, 1e-9));
}

}  // TEST_SUITE
