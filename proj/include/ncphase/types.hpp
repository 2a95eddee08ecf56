#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace ncphase {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Numerical thresholds shared by the modules.
struct Tolerances {
  double singular = 1e-10;      // |det Psi| below this is treated as degenerate
  double rank_relative = 1e-10; // singular values below this * sigma_max are zero
};

/// Canonical Poisson/symplectic matrix J = [[0, I], [-I, 0]] of size 2n.
Matrix canonical_j(std::size_t n);

/// Levi-Civita symbol in two dimensions, epsilon_12 = +1.
Matrix epsilon2();

/// Antisymmetric 3x3 matrix with entries epsilon_ijk v^k (epsilon_123 = +1).
Matrix epsilon3_contract(const Eigen::Vector3d& v);

double max_abs(const Matrix& m);

} // namespace ncphase
