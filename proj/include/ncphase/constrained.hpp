#pragma once

#include "ncphase/core_forms.hpp"
#include "ncphase/dynamics.hpp"
#include "ncphase/errors.hpp"
#include "ncphase/types.hpp"

#include <complex>
#include <vector>

namespace ncphase {

/// Orthonormal basis (columns) of ker Omega; empty when Omega is invertible.
/// Rank cut: sigma < tol.rank_relative * sigma_max.
Matrix kernel(const OmegaMatrix& omega, const Tolerances& tol = {});

/// Affine conditions rows * z + offset = 0.
struct LinearConstraints {
  Matrix rows;
  Vector offset;

  Vector residual(const Vector& z) const { return rows * z + offset; }
};

/// <dH(z) | Z> = 0 for each kernel vector Z. Throws NoKernel if Omega is regular.
LinearConstraints secondary_constraints(const FieldConfig& cfg, const OscillatorModel& model,
                                        const Tolerances& tol = {});

/// { origin + basis * w }, basis orthonormal.
struct AffineSubspace {
  Matrix basis;
  Vector origin;

  Eigen::Index dim() const noexcept { return basis.cols(); }
  /// Euclidean distance from z to the subspace.
  double distance(const Vector& z) const;
};

enum class ChainStatus { Consistent, Empty, Inconsistent };

const char* to_string(ChainStatus status);

/// Nested constraint sets M1 > M2 > ... and the dynamics on the last one.
struct ConstraintChain {
  std::vector<AffineSubspace> subspaces;
  /// constraints[k] cuts subspaces[k] down to subspaces[k + 1].
  std::vector<LinearConstraints> constraints;
  std::size_t terminal_index = 0;
  /// dw/dt = reduced_flow w + reduced_drift in the terminal basis coordinates
  /// (minimum-norm solution; the free part is spanned by gauge).
  Matrix reduced_flow;
  Vector reduced_drift;
  /// Ambient basis of the undetermined directions ker(Omega) within the terminal tangent space.
  Matrix gauge;
  ChainStatus status = ChainStatus::Consistent;

  const AffineSubspace& terminal() const { return subspaces.at(terminal_index); }
  std::vector<Eigen::Index> dimensions() const;
  /// Ambient velocity at a point of the terminal subspace.
  Vector velocity(const Vector& z) const;
  Eigen::VectorXcd flow_eigenvalues() const;
};

class InconsistentSystem : public Error {
public:
  InconsistentSystem(const std::string& what, ConstraintChain partial)
      : Error(what), chain_(std::move(partial)) {}
  const ConstraintChain& chain() const noexcept { return chain_; }

private:
  ConstraintChain chain_;
};

/// Constraint algorithm for i_X omega = dH with H = 1/2 z^T S z + g^T z.
/// Throws InconsistentSystem when the solvability condition has no solution.
ConstraintChain gnh_chain(const OmegaMatrix& omega, const Matrix& hessian, const Vector& gradient_at_zero,
                          const Tolerances& tol = {});

/// Degenerate N = 2 oscillator with B C = -1.
struct ReducedOscillatorN2 {
  double C = -1.0;
  double B = 1.0;
  double omega_r = 0.0;          // signed
  double bracket_qqdag_imag = 0.0; // {q, q^dagger} = i * this
  double hr_coefficient = 0.0;   // H_r = hr_coefficient * q^dagger q
  /// a = a_scale * q^dagger (B > 0) or a_scale * q (B < 0, conjugated)
  double a_scale = 0.0;
  bool conjugated = false;
  /// {a, a^dagger} assembled from the reduced bracket; -i in both sign cases.
  std::complex<double> bracket_a_adag;
};

double degenerate_omega_r(const OscillatorModel& model, double C);
/// The same frequency written through b = B / sqrt(m kappa), B = -1/C.
double degenerate_omega_r_from_B(const OscillatorModel& model, double B);

/// |p/m + i C kappa q| for the N = 2 harmonic model.
double n2_constraint_residual(const OscillatorModel& model, double C, const Vector& z);

/// Rotating solution exp(i omega_r t) on M2. Throws OffConstraint when z0
/// misses M2 by more than on_tol.
Vector degenerate_flow_n2(const OscillatorModel& model, double C, const Vector& z0, double t,
                          double on_tol = 1e-8);

ReducedOscillatorN2 reduced_structure_n2(const OscillatorModel& model, double C);

/// Largest |row . z + offset| over every constraint of the chain.
double constraint_residual(const ConstraintChain& chain, const Vector& z);

/// Exact propagation of the terminal flow (gauge fixed to minimum norm),
/// sampled every dt. Throws OffConstraint if z0 is farther than on_tol
/// from the terminal subspace.
std::vector<Vector> propagate_on_chain(const ConstraintChain& chain, const Vector& z0, double dt,
                                       std::size_t steps, double on_tol = 1e-8);

} // namespace ncphase
