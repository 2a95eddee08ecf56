#include "ncphase/types.hpp"

namespace ncphase {

Matrix canonical_j(std::size_t n) {
  const auto N = static_cast<Eigen::Index>(n);
  Matrix j = Matrix::Zero(2 * N, 2 * N);
  j.topRightCorner(N, N).setIdentity();
  j.bottomLeftCorner(N, N) = -Matrix::Identity(N, N);
  return j;
}

Matrix epsilon2() {
  Matrix e(2, 2);
  e << 0.0, 1.0, -1.0, 0.0;
  return e;
}

Matrix epsilon3_contract(const Eigen::Vector3d& v) {
  Matrix e(3, 3);
  // e_ij = epsilon_ijk v^k
  e << 0.0, v(2), -v(1),
      -v(2), 0.0, v(0),
       v(1), -v(0), 0.0;
  return e;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

} // namespace ncphase
