#include "phstab/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace phstab {

namespace {

double max_abs(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

}  // namespace

HamiltonianDensity HamiltonianDensity::constant(const CMatrix& h, double a, double b) {
  HamiltonianDensity d;
  d.breakpoints = {a, b};
  d.values = {h};
  return d;
}

HamiltonianDensity HamiltonianDensity::sampled(const std::function<CMatrix(double)>& h, double a,
                                               double b, int cells) {
  if (cells < 1) throw std::invalid_argument("HamiltonianDensity::sampled: cells must be >= 1");
  HamiltonianDensity d;
  d.breakpoints.resize(cells + 1);
  d.values.reserve(cells);
  const double dz = (b - a) / cells;
  for (int j = 0; j <= cells; ++j) d.breakpoints[j] = a + j * dz;
  d.breakpoints.back() = b;
  for (int j = 0; j < cells; ++j) {
    const double mid = 0.5 * (d.breakpoints[j] + d.breakpoints[j + 1]);
    d.values.push_back(h(mid));
  }
  return d;
}

int HamiltonianDensity::cell_index(double zeta) const {
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), zeta);
  long idx = static_cast<long>(it - breakpoints.begin()) - 1;
  idx = std::clamp<long>(idx, 0, static_cast<long>(values.size()) - 1);
  return static_cast<int>(idx);
}

double HamiltonianDensity::coercivity_floor() const {
  double floor = std::numeric_limits<double>::infinity();
  for (const CMatrix& h : values) {
    floor = std::min(floor, num::min_hermitian_eigenvalue(h));
  }
  return floor;
}

double HamiltonianDensity::sup_norm() const {
  double s = 0.0;
  for (const CMatrix& h : values) s = std::max(s, num::spectral_norm(h));
  return s;
}

std::vector<Violation> validate_system(const SystemSpec& spec, const Tolerances& tol) {
  std::vector<Violation> out;
  auto flag = [&out](const std::string& code, const std::string& detail) {
    out.push_back({code, detail});
  };

  if (spec.n < 1 || spec.order < 1) {
    flag("dimension", "state dimension and derivative order must be positive");
    return out;
  }
  if (!(spec.a < spec.b)) flag("interval", "interval must satisfy a < b");

  if (static_cast<int>(spec.P.size()) != spec.order + 1) {
    flag("dimension", "expected " + std::to_string(spec.order + 1) + " coefficient matrices");
    return out;
  }
  for (int k = 0; k <= spec.order; ++k) {
    const CMatrix& p = spec.P[k];
    if (p.rows() != spec.n || p.cols() != spec.n) {
      flag("dimension", "P_" + std::to_string(k) + " is not n x n");
      return out;
    }
    if (!num::all_finite(p)) flag("finiteness", "P_" + std::to_string(k) + " has non-finite entries");
    // P_k^* = (-1)^{k+1} P_k, entrywise
    const double sign = (k % 2 == 0) ? -1.0 : 1.0;
    const double defect = max_abs(CMatrix(p.adjoint() - sign * p));
    if (defect > tol.entrywise * std::max(1.0, max_abs(p))) {
      flag("P_k symmetry", "P_" + std::to_string(k) + " violates P_k^* = (-1)^{k+1} P_k (defect " +
                               std::to_string(defect) + ")");
    }
  }
  if (num::smallest_singular_value(spec.P[spec.order]) <= tol.invertibility) {
    flag("P_N invertible", "leading coefficient is numerically singular");
  }

  const HamiltonianDensity& h = spec.density;
  if (h.values.empty() || h.breakpoints.size() != h.values.size() + 1) {
    flag("hamiltonian", "breakpoints/values sizes inconsistent");
    return out;
  }
  if (std::abs(h.breakpoints.front() - spec.a) > tol.entrywise ||
      std::abs(h.breakpoints.back() - spec.b) > tol.entrywise) {
    flag("hamiltonian", "density breakpoints do not span the interval");
  }
  for (size_t j = 0; j + 1 < h.breakpoints.size(); ++j) {
    if (!(h.breakpoints[j] < h.breakpoints[j + 1])) {
      flag("hamiltonian", "breakpoints must be strictly increasing");
      break;
    }
  }
  bool shapes_ok = true;
  for (size_t j = 0; j < h.values.size(); ++j) {
    const CMatrix& hj = h.values[j];
    if (hj.rows() != spec.n || hj.cols() != spec.n) {
      flag("dimension", "H cell " + std::to_string(j) + " is not n x n");
      shapes_ok = false;
      break;
    }
    if (!num::all_finite(hj)) flag("finiteness", "H cell " + std::to_string(j) + " has non-finite entries");
    const double defect = max_abs(CMatrix(hj.adjoint() - hj));
    if (defect > tol.entrywise * std::max(1.0, max_abs(hj))) {
      flag("hermiticity", "H cell " + std::to_string(j) + " is not Hermitian");
    }
  }
  if (shapes_ok) {
    const double m = h.coercivity_floor();
    if (!(m > tol.coercivity)) {
      flag("coercivity", "density is not uniformly positive (floor " + std::to_string(m) + ")");
    }
  }

  const int d = spec.block_dim();
  if (spec.boundary.rows() != d || spec.boundary.cols() != 2 * d) {
    flag("W_B shape", "boundary matrix must be nN x 2nN");
    return out;
  }
  if (!num::all_finite(spec.boundary)) flag("finiteness", "W_B has non-finite entries");
  const CMatrix gram = spec.boundary * spec.boundary.adjoint();
  if (num::smallest_singular_value(gram) <= tol.invertibility) {
    flag("W_B rank", "boundary matrix does not have full row rank");
  }
  return out;
}

bool is_valid(const SystemSpec& spec, const Tolerances& tol) {
  return validate_system(spec, tol).empty();
}

void require_valid(const SystemSpec& spec, const Tolerances& tol) {
  const auto report = validate_system(spec, tol);
  if (report.empty()) return;
  std::ostringstream msg;
  msg << "invalid system spec:";
  for (const auto& v : report) msg << " [" << v.code << "] " << v.detail << ";";
  throw std::invalid_argument(msg.str());
}

CMatrix build_q(const SystemSpec& spec) {
  require_valid(spec);
  const int n = spec.n;
  const int N = spec.order;
  CMatrix q = CMatrix::Zero(n * N, n * N);
  for (int i = 1; i <= N; ++i) {
    for (int j = 1; j <= N; ++j) {
      const int k = i + j - 1;
      if (k > N) continue;
      const double sign = (i % 2 == 1) ? 1.0 : -1.0;
      q.block((i - 1) * n, (j - 1) * n, n, n) = sign * spec.P[k];
    }
  }
  return q;
}

StructureMatrices build_r_ext(const SystemSpec& spec, const Tolerances& tol) {
  StructureMatrices sm;
  sm.q = build_q(spec);
  const int d = spec.block_dim();
  const double s = 1.0 / std::sqrt(2.0);
  const CMatrix id = CMatrix::Identity(d, d);
  const CMatrix q_inv = sm.q.partialPivLu().inverse();

  sm.r_ext = CMatrix::Zero(2 * d, 2 * d);
  sm.r_ext.topLeftCorner(d, d) = s * sm.q;
  sm.r_ext.topRightCorner(d, d) = -s * sm.q;
  sm.r_ext.bottomLeftCorner(d, d) = s * id;
  sm.r_ext.bottomRightCorner(d, d) = s * id;

  sm.r_ext_inv = CMatrix::Zero(2 * d, 2 * d);
  sm.r_ext_inv.topLeftCorner(d, d) = s * q_inv;
  sm.r_ext_inv.topRightCorner(d, d) = s * id;
  sm.r_ext_inv.bottomLeftCorner(d, d) = -s * q_inv;
  sm.r_ext_inv.bottomRightCorner(d, d) = s * id;

  const double defect = (sm.r_ext * sm.r_ext_inv - CMatrix::Identity(2 * d, 2 * d)).norm();
  if (defect > tol.consistency * 2 * d) {
    throw std::runtime_error("build_r_ext: inverse verification failed (defect " +
                             std::to_string(defect) + ")");
  }
  return sm;
}

Complex energy_inner_product(const GridFunction& f, const GridFunction& g,
                             const HamiltonianDensity& h) {
  if (f.grid.size() != f.values.size() || g.grid.size() != g.values.size()) {
    throw std::invalid_argument("energy_inner_product: grid/value sizes differ");
  }
  if (f.grid.size() != g.grid.size() || f.grid.size() < 2) {
    throw std::invalid_argument("energy_inner_product: functions must share a grid of >= 2 points");
  }
  for (size_t i = 0; i < f.grid.size(); ++i) {
    if (f.grid[i] != g.grid[i]) {
      throw std::invalid_argument("energy_inner_product: grids differ at index " + std::to_string(i));
    }
  }
  // the grid must refine the density's cells
  for (size_t j = 1; j + 1 < h.breakpoints.size(); ++j) {
    const double bp = h.breakpoints[j];
    bool found = false;
    for (double z : f.grid) {
      if (std::abs(z - bp) <= 1e-12 * std::max(1.0, std::abs(bp))) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::invalid_argument("energy_inner_product: grid does not contain density breakpoint");
    }
  }

  Complex acc(0.0, 0.0);
  for (size_t i = 0; i + 1 < f.grid.size(); ++i) {
    const double dz = f.grid[i + 1] - f.grid[i];
    if (dz <= 0.0) throw std::invalid_argument("energy_inner_product: grid must be increasing");
    const double mid = 0.5 * (f.grid[i] + f.grid[i + 1]);
    const CVector fm = 0.5 * (f.values[i] + f.values[i + 1]);
    const CVector gm = 0.5 * (g.values[i] + g.values[i + 1]);
    acc += dz * (gm.adjoint() * h.at(mid) * fm)(0, 0);
  }
  return 0.5 * acc;
}

}  // namespace phstab
