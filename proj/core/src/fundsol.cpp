#include "phstab/fundsol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace phstab {

namespace {

void require_shapes(const SystemSpec& spec) {
  if (spec.n < 1 || spec.order < 1 || static_cast<int>(spec.P.size()) != spec.order + 1 ||
      spec.density.values.empty()) {
    throw std::invalid_argument("fundsol: malformed system spec");
  }
}

CMatrix matrix_power(const CMatrix& g, long m) {
  CMatrix result = CMatrix::Identity(g.rows(), g.cols());
  CMatrix base = g;
  while (m > 0) {
    if (m & 1) result = base * result;
    base = base * base;
    m >>= 1;
  }
  return result;
}

}  // namespace

CompanionCells CompanionCells::build(const SystemSpec& spec) {
  require_shapes(spec);
  const int n = spec.n;
  const int N = spec.order;
  const int d = n * N;
  const Eigen::PartialPivLU<CMatrix> pn_lu(spec.P[N]);

  CompanionCells cc;
  cc.breakpoints = spec.density.breakpoints;
  cc.base.reserve(spec.density.cells());
  cc.slope.reserve(spec.density.cells());

  CMatrix base0 = CMatrix::Zero(d, d);
  for (int i = 0; i + 1 < N; ++i) {
    base0.block(i * n, (i + 1) * n, n, n) = CMatrix::Identity(n, n);
  }
  for (int k = 0; k < N; ++k) {
    base0.block((N - 1) * n, k * n, n, n) = -pn_lu.solve(spec.P[k]);
  }

  for (const CMatrix& h : spec.density.values) {
    CMatrix slope = CMatrix::Zero(d, d);
    slope.block((N - 1) * n, 0, n, n) = pn_lu.solve(h.partialPivLu().inverse());
    cc.base.push_back(base0);
    cc.slope.push_back(slope);
  }
  return cc;
}

CMatrix build_companion(const SystemSpec& spec, Complex lambda, double zeta) {
  require_shapes(spec);
  if (zeta < spec.a - 1e-12 || zeta > spec.b + 1e-12) {
    throw std::invalid_argument("build_companion: zeta outside [a, b]");
  }
  const CompanionCells cc = CompanionCells::build(spec);
  return cc.field(spec.density.cell_index(zeta), lambda);
}

FundamentalSolution propagate(const SystemSpec& spec, Complex lambda,
                              const PropagateOptions& opts) {
  return propagate(CompanionCells::build(spec), lambda, opts);
}

FundamentalSolution propagate(const CompanionCells& cells, Complex lambda,
                              const PropagateOptions& opts) {
  const double a = cells.breakpoints.front();
  const double b = cells.breakpoints.back();

  // Node set: cell boundaries, plus any requested sample points.
  std::vector<double> nodes(cells.breakpoints);
  std::set<double> requested;
  for (double z : opts.sample_points) {
    const double zc = std::clamp(z, a, b);
    nodes.push_back(zc);
    requested.insert(zc);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  const bool record_requested = !opts.sample_points.empty();

  FundamentalSolution fs;
  fs.lambda = lambda;
  fs.method = SolveMethod::piecewise_exp;

  const Eigen::Index d = cells.base.front().rows();
  CMatrix psi = CMatrix::Identity(d, d);
  long exp_count = 0;

  auto record = [&](double z) {
    if (opts.keep_samples || (record_requested && requested.count(z))) {
      fs.samples.emplace_back(z, psi);
    }
  };
  record(a);

  int cell = 0;
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double lo = nodes[i];
    const double hi = nodes[i + 1];
    while (cell + 1 < cells.cells() && lo >= cells.breakpoints[cell + 1]) ++cell;
    const double dz = hi - lo;
    const CMatrix field = cells.field(cell, lambda);
    const double step_norm = field.norm() * dz;
    const long parts = step_norm > opts.max_step_norm
                           ? static_cast<long>(std::ceil(step_norm / opts.max_step_norm))
                           : 1;
    const CMatrix g = num::mat_exp(field * (dz / static_cast<double>(parts)));
    exp_count += parts;
    psi = (parts == 1) ? CMatrix(g * psi) : CMatrix(matrix_power(g, parts) * psi);
    record(hi);
  }

  fs.value_at_b = psi;
  if (!num::all_finite(psi)) throw std::runtime_error("propagate: non-finite fundamental solution");
  fs.est_error = static_cast<double>(exp_count) * 1e-13 * std::max(1.0, psi.norm());
  return fs;
}

FundamentalSolution picard_fundamental(const SystemSpec& spec, Complex lambda,
                                       const PicardOptions& opts) {
  if (opts.grid_points < 2) throw std::invalid_argument("picard_fundamental: grid_points must be >= 2");
  if (opts.tol <= 0.0) throw std::invalid_argument("picard_fundamental: tol must be positive");
  const CompanionCells cells = CompanionCells::build(spec);
  const double a = cells.breakpoints.front();
  const double b = cells.breakpoints.back();
  const double total = b - a;
  const Eigen::Index d = cells.base.front().rows();

  // Per-cell node layout; every cell gets nodes proportional to its width.
  struct Segment {
    int cell;
    double h;
  };
  std::vector<double> zs{a};
  std::vector<Segment> segs;
  for (int j = 0; j < cells.cells(); ++j) {
    const double lo = cells.breakpoints[j];
    const double hi = cells.breakpoints[j + 1];
    const long steps = std::max<long>(
        1, std::lround(static_cast<double>(opts.grid_points) * (hi - lo) / total));
    const double h = (hi - lo) / static_cast<double>(steps);
    for (long s = 1; s <= steps; ++s) {
      zs.push_back(s == steps ? hi : lo + h * static_cast<double>(s));
      segs.push_back({j, h});
    }
  }
  const size_t m = zs.size();

  std::vector<CMatrix> fields;
  fields.reserve(cells.cells());
  for (int j = 0; j < cells.cells(); ++j) fields.push_back(cells.field(j, lambda));

  const CMatrix id = CMatrix::Identity(d, d);
  std::vector<CMatrix> u(m, id), next(m, id);

  int iter = 0;
  double delta = std::numeric_limits<double>::infinity();
  for (; iter < opts.max_iter; ++iter) {
    CMatrix acc = CMatrix::Zero(d, d);
    next[0] = id;
    delta = 0.0;
    for (size_t i = 1; i < m; ++i) {
      const Segment& sg = segs[i - 1];
      acc += (0.5 * sg.h) * (fields[sg.cell] * (u[i - 1] + u[i]));
      next[i] = id + acc;
      delta = std::max(delta, (next[i] - u[i]).cwiseAbs().maxCoeff());
    }
    u.swap(next);
    if (delta < opts.tol) break;
  }
  if (delta >= opts.tol) {
    throw NonConvergenceError("picard_fundamental: no convergence after " +
                                  std::to_string(opts.max_iter) + " iterations (delta " +
                                  std::to_string(delta) + ")",
                              opts.max_iter, delta);
  }

  FundamentalSolution fs;
  fs.lambda = lambda;
  fs.method = SolveMethod::picard;
  fs.value_at_b = u.back();
  if (!num::all_finite(fs.value_at_b)) {
    throw std::runtime_error("picard_fundamental: non-finite fundamental solution");
  }
  // quadrature is second order in the largest step
  double hmax = 0.0;
  for (const Segment& sg : segs) hmax = std::max(hmax, sg.h);
  fs.est_error = delta + hmax * hmax;
  if (opts.keep_samples) {
    for (size_t i = 0; i < m; ++i) fs.samples.emplace_back(zs[i], u[i]);
  }
  return fs;
}

double continuity_gap(const SystemSpec& a, const SystemSpec& b, Complex lambda) {
  if (a.n != b.n || a.order != b.order) {
    throw std::invalid_argument("continuity_gap: dimension mismatch");
  }
  if (std::abs(a.a - b.a) > 1e-12 || std::abs(a.b - b.b) > 1e-12) {
    throw std::invalid_argument("continuity_gap: interval mismatch");
  }

  std::vector<double> pts(a.density.breakpoints);
  pts.insert(pts.end(), b.density.breakpoints.begin(), b.density.breakpoints.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<double> probes(pts);
  for (size_t i = 0; i + 1 < pts.size(); ++i) probes.push_back(0.5 * (pts[i] + pts[i + 1]));
  std::sort(probes.begin(), probes.end());

  PropagateOptions opts;
  opts.sample_points = probes;
  const FundamentalSolution fa = propagate(a, lambda, opts);
  const FundamentalSolution fb = propagate(b, lambda, opts);
  if (fa.samples.size() != fb.samples.size()) {
    throw std::runtime_error("continuity_gap: sample sets diverged");
  }
  double gap = 0.0;
  for (size_t i = 0; i < fa.samples.size(); ++i) {
    gap = std::max(gap, (fa.samples[i].second - fb.samples[i].second).norm());
  }
  return gap;
}

}  // namespace phstab
