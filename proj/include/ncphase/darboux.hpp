#pragma once

#include "ncphase/core_forms.hpp"
#include "ncphase/types.hpp"

namespace ncphase {

/// Linear Darboux chart zeta = T z with Omega = T^T J T.
struct DarbouxMap {
  Matrix T;
  Matrix Tinv;
  double residual = 0.0;  // max |T^T J T - Omega|
  double condition = 0.0; // ||T||_1 ||T^{-1}||_1
};

struct N2Coefficients {
  double chi = 1.0;
  double u = 1.0; // (1 + sqrt(chi)) / 2
};

struct N3Coefficients {
  double theta = 0.0;
  double chi = 1.0;
  double u = 1.0;
  double gamma = -0.125;
  double gamma_prime = 0.375;
};

enum class Charge { ElectricOnly, DualOnly };

/// Below this |theta| the 0/0 forms gamma, gamma' are evaluated by series.
inline constexpr double kThetaSeriesThreshold = 1e-6;

N2Coefficients n2_coefficients(double B, double C, double tol = 1e-10);
N3Coefficients n3_coefficients(double theta, double tol = 1e-10);

/// Closed-form N = 2 chart. Throws DegenerateChi for |chi| <= tol and
/// NegativeChi for chi < 0 (use symplectic_gram_schmidt there).
DarbouxMap darboux_n2(double B, double C, double tol = 1e-10);

/// Closed-form N = 3 chart for pseudovector fields B, C.
DarbouxMap darboux_n3(const Eigen::Vector3d& B, const Eigen::Vector3d& C, double tol = 1e-10);

/// Shear chart when one of the charges vanishes, built from the linear
/// potentials A_j = 1/2 eF_ij q^i or A~^j = 1/2 rG^kj p_k.
DarbouxMap darboux_single_charge(const FieldConfig& cfg, Charge which);

/// Generic chart by symplectic orthogonalization with largest pivots.
DarbouxMap symplectic_gram_schmidt(const OmegaMatrix& omega, const Tolerances& tol = {});

/// max |T^T J T - Omega|.
double verify_darboux(const DarbouxMap& map, const OmegaMatrix& omega);

/// max |S^T J S - J|.
double symplectic_defect(const Matrix& S);

/// Defect of T1 T2^{-1} as a symplectic matrix; small when both maps chart
/// the same Omega.
double equivalence_defect(const DarbouxMap& a, const DarbouxMap& b);

} // namespace ncphase
