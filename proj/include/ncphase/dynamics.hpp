#pragma once

#include "ncphase/core_forms.hpp"
#include "ncphase/types.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace ncphase {

enum class PotentialKind {
  Harmonic,  // V = kappa/2 q.q
  Linear,    // V = -E.q (constant force; E = 0 is the free particle)
  Quadratic, // H = 1/2 z^T S z + g^T z given directly
};

/// H = p.p / 2m + V(q), or a raw quadratic form on phase space.
struct OscillatorModel {
  double m = 1.0;
  double kappa = 1.0;
  PotentialKind kind = PotentialKind::Harmonic;
  Vector E;         // Linear only
  double hbar = 1.0;
  Matrix hessian;   // Quadratic only, 2N x 2N symmetric
  Vector gradient;  // Quadratic only, 2N

  static OscillatorModel harmonic(double m, double kappa, double hbar = 1.0);
  static OscillatorModel linear(double m, Vector E, double hbar = 1.0);
  static OscillatorModel quadratic(Matrix hessian, Vector gradient, double hbar = 1.0);

  /// Throws InvalidModel when the invariants fail for dimension n.
  void validate(std::size_t n) const;
};

/// Hessian S of H (constant, since every supported H is quadratic).
Matrix hamiltonian_hessian(const OscillatorModel& model, std::size_t n);
/// Gradient of H at z = 0.
Vector hamiltonian_offset(const OscillatorModel& model, std::size_t n);
double energy(const OscillatorModel& model, const Vector& z);

/// Affine vector field dz/dt = M z + k with M = Lambda S, k = Lambda g.
struct LinearFlow {
  Matrix M;
  Vector k;
};

LinearFlow linear_flow(const FieldConfig& cfg, const OscillatorModel& model,
                       const Tolerances& tol = {});

/// Right-hand side in the Psi^{-1}/Phi^{-1} component form.
Vector equations_of_motion(const FieldConfig& cfg, const OscillatorModel& model, const Vector& z,
                           const Tolerances& tol = {});

struct N2Frequencies {
  double b = 0.0;
  double c = 0.0;
  double chi = 1.0;
  double u = 1.0;
  double m_prime = 1.0;
  double kappa_prime = 1.0;
  double m_omega0_prime = 1.0; // m' omega0' = sqrt(m' kappa')
  double omega0 = 1.0;
  double omega0_prime = 1.0;
  double omegaL_prime = 0.0;
  double omega_plus = 1.0;
  double omega_minus = 1.0;
};

N2Frequencies n2_frequencies(const OscillatorModel& model, double B, double C, double tol = 1e-10);

/// m' omega0' from the ratio form sqrt(m kappa) sqrt((1 + b^2/4u^2) / (1 + c^2/4u^2)).
double m_omega0_prime_ratio_form(const OscillatorModel& model, double B, double C);

/// Complex shift variables A(+) and A(-)^dagger of the N = 2 oscillator.
struct ShiftAmplitudes {
  std::complex<double> plus;
  std::complex<double> minus_dag;
};

ShiftAmplitudes shift_amplitudes_n2(const OscillatorModel& model, double B, double C,
                                    const Vector& z0);

/// Phase-space point assembled from shift amplitudes (the inverse relations).
Vector state_from_shift_n2(const OscillatorModel& model, double B, double C,
                           const ShiftAmplitudes& a);

/// Exact N = 2 harmonic flow through the rotating shift variables.
Vector closed_form_solution_n2(const OscillatorModel& model, double B, double C, const Vector& z0,
                               double t);

/// xi^1 pi_2 - xi^2 pi_1 for zeta = (xi^1, xi^2, pi_1, pi_2).
double angular_momentum(const Vector& zeta);

struct N3ParallelFrequencies {
  double m_perp = 1.0;
  double kappa_perp = 1.0;
  double omega3 = 1.0;
  double omega_perp = 1.0;
  double omegaL_prime = 0.0;
  double omega_plus = 1.0;
  double omega_minus = 1.0;
};

/// Fields along the z-axis: transverse N = 2 problem plus a bare z oscillator.
N3ParallelFrequencies n3_parallel_model(const OscillatorModel& model, double B, double C,
                                        double tol = 1e-10);

enum class Method { Exact, Midpoint };

struct PhaseState {
  double t = 0.0;
  Vector z;
  double H = 0.0;
  std::optional<double> lambda3;
};

struct Trajectory {
  std::vector<PhaseState> samples;
};

/// Fixed-step propagation. Exact uses exp(dt M) (augmented for the affine
/// drift); Midpoint uses the Cayley map (I - dt M/2)^{-1} (I + dt M/2).
/// Lambda3 is recorded in Darboux variables for N = 2 and N = 3 when a
/// closed-form chart exists (chi > 0).
Trajectory integrate(const FieldConfig& cfg, const OscillatorModel& model, const Vector& z0,
                     double dt, std::size_t steps, Method method, const Tolerances& tol = {});

/// Pseudovector components (B^1, B^2, B^3) of an antisymmetric 3x3 matrix eps_ijk B^k.
Eigen::Vector3d pseudovector(const Matrix& antisymmetric3);

} // namespace ncphase
