#pragma once

#include "ncphase/types.hpp"

#include <cstddef>

namespace ncphase {

/// Constant coupled fields eF (N x N) and rG (N x N) on R^{2N}.
///
/// Coordinates are ordered (q^1..q^N, p_1..p_N). Both matrices must be
/// antisymmetric to 1e-14 relative to their largest entry; construction
/// throws InvalidField otherwise.
class FieldConfig {
public:
  FieldConfig(Matrix eF, Matrix rG);

  /// Zero fields in dimension n (the canonical structure).
  static FieldConfig canonical(std::size_t n);
  /// N = 2 pseudoscalars: eF = B eps, rG = C eps.
  static FieldConfig planar(double B, double C);
  /// N = 3 pseudovectors: eF_ij = eps_ijk B^k, rG^ij = eps^ijk C_k.
  static FieldConfig spatial(const Eigen::Vector3d& B, const Eigen::Vector3d& C);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(eF_.rows()); }
  const Matrix& eF() const noexcept { return eF_; }
  const Matrix& rG() const noexcept { return rG_; }

private:
  Matrix eF_;
  Matrix rG_;
};

/// The 2N x 2N matrix [[-eF, I], [-I, rG]] of the modified two-form.
struct OmegaMatrix {
  Matrix entries;
};

struct PsiPhiPair {
  Matrix psi; // I - rG eF
  Matrix phi; // I - eF rG
  double det_psi = 0.0;
};

/// Lambda = -Omega^{-1}; brackets are grad(f)^T Lambda grad(g).
struct PoissonMatrix {
  Matrix entries;
  /// max |Lambda_closed - (-Omega^{-1})_dense|, filled by poisson_matrix.
  double dense_residual = 0.0;
};

OmegaMatrix build_omega(const FieldConfig& cfg);
PsiPhiPair psi_phi(const FieldConfig& cfg);

/// det Psi. Callers compare |det Psi| against Tolerances::singular.
double regularity(const FieldConfig& cfg);

/// Closed-form Poisson matrix from the Psi/Phi blocks, cross-checked
/// against dense inversion of Omega. Throws SingularOmega when
/// |det Psi| < tol.singular.
PoissonMatrix poisson_matrix(const FieldConfig& cfg, const Tolerances& tol = {});

/// -Omega^{-1} by dense LU, independent of the block formula.
Matrix poisson_matrix_dense(const OmegaMatrix& omega);

double bracket(const Vector& grad_f, const Vector& grad_g, const PoissonMatrix& lambda);

/// X_f from the omega-flat inversion written with Psi^{-1}, Phi^{-1}.
Vector hamiltonian_vector_field(const FieldConfig& cfg, const Vector& grad_f,
                                const Tolerances& tol = {});

} // namespace ncphase
