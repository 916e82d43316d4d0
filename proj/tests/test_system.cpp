#include <doctest.h>

#include <algorithm>
#include <complex>

#include "phstab/system.hpp"
#include "support.hpp"

using namespace phstab;

namespace {

bool has_code(const std::vector<Violation>& report, const std::string& code) {
  for (const auto& v : report) {
    if (v.code == code) return true;
  }
  return false;
}

// n = 1 spec of arbitrary order with scalar coefficients
SystemSpec scalar_spec(std::vector<Complex> p, double h = 1.0) {
  SystemSpec spec;
  spec.n = 1;
  spec.order = int(p.size()) - 1;
  spec.a = 0.0;
  spec.b = 1.0;
  for (Complex c : p) {
    CMatrix m(1, 1);
    m(0, 0) = c;
    spec.P.push_back(m);
  }
  CMatrix hm(1, 1);
  hm(0, 0) = h;
  spec.density = HamiltonianDensity::constant(hm, 0.0, 1.0);
  const int d = spec.block_dim();
  CMatrix wb = CMatrix::Zero(d, 2 * d);
  wb.leftCols(d) = CMatrix::Identity(d, d);
  spec.boundary = wb;
  return spec;
}

}  // namespace

TEST_SUITE("system") {

TEST_CASE("validate_system: the string network passes clean") {
  const SystemSpec spec = phtest::strings_spec(1.0, 1.0, 1.0, 1.0);
  CHECK(validate_system(spec).empty());
}

TEST_CASE("validate_system: flipped P_1 symmetry is flagged") {
  SystemSpec spec = phtest::strings_spec(1.0, 1.0, 1.0, 1.0);
  // N = 1 requires P_1 Hermitian; make it skew instead
  spec.P[1](0, 1) = Complex(0.0, 1.0);
  spec.P[1](1, 0) = Complex(0.0, 1.0);
  CHECK(has_code(validate_system(spec), "P_k symmetry"));
}

TEST_CASE("validate_system: zero eigenvalue in H is a coercivity violation") {
  SystemSpec spec = phtest::strings_spec(1.0, 1.0, 1.0, 1.0);
  spec.density.values[0](0, 0) = 0.0;
  CHECK(has_code(validate_system(spec), "coercivity"));
}

TEST_CASE("validate_system: singular leading coefficient, boundary rank, interval") {
  SystemSpec spec = phtest::strings_spec(1.0, 1.0, 1.0, 1.0);
  spec.P[1].setZero();
  CHECK(has_code(validate_system(spec), "P_N invertible"));

  SystemSpec spec2 = phtest::strings_spec(1.0, 1.0, 1.0, 1.0);
  spec2.boundary.row(1) = spec2.boundary.row(0);
  CHECK(has_code(validate_system(spec2), "W_B rank"));

  SystemSpec spec3 = phtest::strings_spec(1.0, 1.0, 1.0, 1.0);
  spec3.a = spec3.b;
  CHECK(has_code(validate_system(spec3), "interval"));
}

TEST_CASE("build_q: order 1 returns P_1 exactly") {
  const SystemSpec spec = phtest::strings_spec(2.0, 1.0, 1.0);
  CHECK(phtest::max_abs_diff(build_q(spec), spec.P[1]) == 0.0);
}

TEST_CASE("build_q: order 2 block pattern [[P1, P2], [-P2, 0]]") {
  // valid order-2 data: P_1 Hermitian, P_2 skew-Hermitian invertible
  SystemSpec spec = scalar_spec({Complex(0.0), Complex(2.0), Complex(0.0, 1.0)});
  REQUIRE(validate_system(spec).empty());
  CMatrix expected(2, 2);
  expected << Complex(2.0), Complex(0.0, 1.0), Complex(0.0, -1.0), Complex(0.0);
  CHECK(phtest::max_abs_diff(build_q(spec), expected) == 0.0);
}

TEST_CASE("build_q: order 3 block pattern") {
  SystemSpec spec = scalar_spec({Complex(0.0), Complex(2.0), Complex(0.0, 0.7), Complex(1.5)});
  REQUIRE(validate_system(spec).empty());
  CMatrix expected(3, 3);
  expected << Complex(2.0), Complex(0.0, 0.7), Complex(1.5),  //
      Complex(0.0, -0.7), Complex(-1.5), Complex(0.0),        //
      Complex(1.5), Complex(0.0), Complex(0.0);
  CHECK(phtest::max_abs_diff(build_q(spec), expected) == 0.0);
}

TEST_CASE("build_q is Hermitian for random valid specs") {
  phtest::Rng rng(404);
  for (int rep = 0; rep < 5; ++rep) {
    const SystemSpec spec = phtest::random_order1_spec(rng, 3, 2);
    const CMatrix q = build_q(spec);
    CHECK((q - q.adjoint()).norm() < 1e-12);
  }
}

TEST_CASE("build_r_ext: involution case gives the closed-form inverse") {
  // N = 1, P_1 = [[0,1],[1,0]] squares to the identity
  SystemSpec spec;
  spec.n = 2;
  spec.order = 1;
  spec.a = 0.0;
  spec.b = 1.0;
  CMatrix p1(2, 2);
  p1 << 0.0, 1.0, 1.0, 0.0;
  spec.P = {CMatrix::Zero(2, 2), p1};
  spec.density = HamiltonianDensity::constant(CMatrix::Identity(2, 2), 0.0, 1.0);
  CMatrix wb = CMatrix::Zero(2, 4);
  wb.leftCols(2) = CMatrix::Identity(2, 2);
  spec.boundary = wb;

  const StructureMatrices sm = build_r_ext(spec);
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix expected = CMatrix::Zero(4, 4);
  expected.topLeftCorner(2, 2) = s * p1;
  expected.topRightCorner(2, 2) = s * CMatrix::Identity(2, 2);
  expected.bottomLeftCorner(2, 2) = -s * p1;
  expected.bottomRightCorner(2, 2) = s * CMatrix::Identity(2, 2);
  CHECK(phtest::max_abs_diff(sm.r_ext_inv, expected) < 1e-14);
  CHECK(phtest::max_abs_diff(CMatrix(sm.r_ext * sm.r_ext_inv), CMatrix::Identity(4, 4)) < 1e-14);
}

TEST_CASE("build_r_ext: order-2 assembly keeps the [[Q,-Q],[I,I]] layout") {
  SystemSpec spec = scalar_spec({Complex(0.0), Complex(0.0), Complex(0.0, 1.0)});
  REQUIRE(validate_system(spec).empty());
  const StructureMatrices sm = build_r_ext(spec);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(phtest::max_abs_diff(CMatrix(sm.r_ext.topLeftCorner(2, 2)), CMatrix(s * sm.q)) == 0.0);
  CHECK(phtest::max_abs_diff(CMatrix(sm.r_ext.topRightCorner(2, 2)), CMatrix(-s * sm.q)) == 0.0);
  CHECK(phtest::max_abs_diff(CMatrix(sm.r_ext * sm.r_ext_inv), CMatrix::Identity(4, 4)) < 1e-12);
}

TEST_CASE("structure identity: R_ext^{-1} swap R_ext^{-*} = diag(Q^{-1}, -Q^{-1})") {
  const SystemSpec spec = phtest::strings_spec(1.0, 1.0, 1.0);
  const StructureMatrices sm = build_r_ext(spec);
  CMatrix swap = CMatrix::Zero(12, 12);
  swap.topRightCorner(6, 6) = CMatrix::Identity(6, 6);
  swap.bottomLeftCorner(6, 6) = CMatrix::Identity(6, 6);
  const CMatrix lhs = sm.r_ext_inv * swap * sm.r_ext_inv.adjoint();
  // for the strings Q = P_1 with P_1^2 = I, so Q^{-1} = P_1
  CMatrix rhs = CMatrix::Zero(12, 12);
  rhs.topLeftCorner(6, 6) = spec.P[1];
  rhs.bottomRightCorner(6, 6) = -spec.P[1];
  CHECK(phtest::max_abs_diff(lhs, rhs) < 1e-10);
}

TEST_CASE("energy_inner_product: constant sections") {
  const CMatrix id = CMatrix::Identity(2, 2);
  HamiltonianDensity h = HamiltonianDensity::constant(id, 0.0, 1.0);
  GridFunction f;
  f.grid = {0.0, 0.5, 1.0};
  CVector e1(2);
  e1 << 1.0, 0.0;
  f.values = {e1, e1, e1};
  CHECK(std::abs(energy_inner_product(f, f, h) - Complex(0.5)) < 1e-14);

  GridFunction g = f;
  CVector e2(2);
  e2 << 0.0, 1.0;
  g.values = {e2, e2, e2};
  CHECK(std::abs(energy_inner_product(f, g, h)) < 1e-14);

  CMatrix d(2, 2);
  d << 2.0, 0.0, 0.0, 1.0;
  HamiltonianDensity hd = HamiltonianDensity::constant(d, 0.0, 1.0);
  CHECK(std::abs(energy_inner_product(f, f, hd) - Complex(1.0)) < 1e-14);
}

TEST_CASE("energy_inner_product rejects mismatched grids") {
  HamiltonianDensity h = HamiltonianDensity::constant(CMatrix::Identity(1, 1), 0.0, 1.0);
  GridFunction f, g;
  f.grid = {0.0, 1.0};
  g.grid = {0.0, 0.5};
  CVector one(1);
  one << 1.0;
  f.values = {one, one};
  g.values = {one, one};
  CHECK_THROWS_AS(energy_inner_product(f, g, h), std::invalid_argument);
}

TEST_CASE("energy_inner_product dominates the coercivity floor") {
  phtest::Rng rng(505);
  for (int rep = 0; rep < 5; ++rep) {
    HamiltonianDensity h;
    h.breakpoints = {0.0, 0.4, 1.0};
    h.values = {phtest::random_hpd(rng, 2, 0.5, 2.0), phtest::random_hpd(rng, 2, 0.5, 2.0)};
    const double m = h.coercivity_floor();
    REQUIRE(m > 0.0);

    GridFunction f;
    for (int i = 0; i <= 10; ++i) f.grid.push_back(i / 10.0);
    f.grid.push_back(0.4);
    std::sort(f.grid.begin(), f.grid.end());
    for (size_t i = 0; i < f.grid.size(); ++i) {
      CVector v(2);
      v << phtest::random_complex(rng), phtest::random_complex(rng);
      f.values.push_back(v);
    }
    const Complex e = energy_inner_product(f, f, h);
    // the L2 reference uses the same midpoint quadrature with H = I
    HamiltonianDensity id = HamiltonianDensity::constant(CMatrix::Identity(2, 2), 0.0, 1.0);
    const Complex l2 = energy_inner_product(f, f, id);
    CHECK(e.real() >= m * l2.real() - 1e-12);
    CHECK(std::abs(e.imag()) < 1e-12);
  }
}

TEST_CASE("sampled density picks cell midpoints") {
  auto fn = [](double z) {
    CMatrix m(1, 1);
    m(0, 0) = 1.0 + 0.5 * z;
    return m;
  };
  const HamiltonianDensity h = HamiltonianDensity::sampled(fn, 0.0, 1.0, 8);
  CHECK(h.cells() == 8);
  CHECK(h.at(0.06)(0, 0).real() == doctest::Approx(1.0 + 0.5 * 0.0625));
  CHECK(h.coercivity_floor() > 1.0);
}

}  // TEST_SUITE
