#include "phstab/generation.hpp"

#include <stdexcept>

namespace phstab {

CMatrix generation_matrix(const SystemSpec& spec) {
  const StructureMatrices sm = build_r_ext(spec);
  const int d = spec.block_dim();
  CMatrix swap = CMatrix::Zero(2 * d, 2 * d);
  swap.topRightCorner(d, d) = CMatrix::Identity(d, d);
  swap.bottomLeftCorner(d, d) = CMatrix::Identity(d, d);

  const CMatrix wr = spec.boundary * sm.r_ext_inv;
  CMatrix m = wr * swap * wr.adjoint();
  if (!num::all_finite(m)) throw std::runtime_error("generation_matrix: non-finite result");
  return m;
}

GenerationVerdict check_contraction_generator(const SystemSpec& spec, double tol) {
  GenerationVerdict v;
  v.test_matrix = generation_matrix(spec);
  v.witness = num::min_hermitian_eigenvalue(v.test_matrix);
  v.generates = v.witness >= -tol;
  v.marginal = v.generates && v.witness < 0.0;
  return v;
}

}  // namespace phstab
