#pragma once

#include "ncphase/core_forms.hpp"
#include "ncphase/darboux.hpp"
#include "ncphase/types.hpp"

#include <cstddef>
#include <vector>

namespace ncphase {

using IntMatrix = Eigen::MatrixXi;

/// so(N) generator for the axis pair alpha < beta (zero-based):
/// (M)^i_j = delta^i_alpha delta_beta j - delta^i_beta delta_alpha j.
struct RotationGenerator {
  std::size_t alpha = 0;
  std::size_t beta = 1;
  IntMatrix matrix;
};

/// All N(N-1)/2 generators in lexicographic pair order. Throws InvalidField for N < 2.
std::vector<RotationGenerator> generators(std::size_t n);

IntMatrix commutator(const IntMatrix& a, const IntMatrix& b);

/// Structure constants f[a][b][c] with [M_a, M_b] = sum_c f[a][b][c] M_c,
/// read off from integer matrix commutators.
using StructureConstants = std::vector<std::vector<std::vector<int>>>;
StructureConstants structure_constants_from_generators(std::size_t n);

/// Antisymmetric table of momentum components J_alpha_beta.
struct MomentumValue {
  Matrix components;

  double operator()(std::size_t alpha, std::size_t beta) const {
    return components(static_cast<Eigen::Index>(alpha), static_cast<Eigen::Index>(beta));
  }
};

/// J_ab = p_k (M_ab)^k_j q^j = p_a q_b - p_b q_a. For N = 2 this makes
/// J_12 = -(q^1 p_2 - q^2 p_1).
MomentumValue momentum_canonical(const Vector& q, const Vector& p);

/// Same bilinear on Darboux coordinates zeta = (xi, pi).
MomentumValue momentum_xi_pi(const Vector& zeta);

/// Momentum of the shear chart of a single-charge configuration, i.e. J
/// evaluated on zeta = T z with the linear potentials.
MomentumValue momentum_single_charge(const FieldConfig& cfg, Charge which, const Vector& z);

/// Symmetric 2N x 2N matrix A with J_ab(z) = 1/2 z^T A z.
Matrix momentum_quadratic_form(std::size_t n, std::size_t alpha, std::size_t beta);

/// For f = 1/2 z^T A z and g = 1/2 z^T B z, {f, g} = 1/2 z^T Q z with
/// Q = A Lambda B - B Lambda A.
Matrix quadratic_bracket(const Matrix& a, const Matrix& b, const Matrix& lambda);

/// Structure constants from canonical brackets of the J_ab quadratic forms.
/// Throws Error if a bracket is not an integer combination of the J's.
StructureConstants structure_constants_from_brackets(std::size_t n);

struct InvarianceReport {
  bool symplectic = false;
  double residual_eF = 0.0;    // max |R^T eF R - eF|
  double residual_rG = 0.0;    // max |R rG R^T - rG|
  double residual_omega = 0.0; // max |S^T Omega S - Omega|, S = diag(R, R)
};

/// Constant-field reading of the invariance conditions for q -> R q,
/// p -> R p. Throws NotARotation when |R^T R - I| > 1e-10 or det R != 1.
InvarianceReport invariance_check(const FieldConfig& cfg, const Matrix& R, double tol = 1e-10);

/// Finite rotation exp(1/2 u^ab M_ab) for antisymmetric u.
Matrix rotation_from_angles(const Matrix& u);

/// exp(angle M_ab) for a single axis pair.
Matrix rotation_in_plane(std::size_t n, std::size_t alpha, std::size_t beta, double angle);

} // namespace ncphase
