#include "ncphase/core_forms.hpp"

#include "ncphase/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ncphase {
namespace {

void require_antisymmetric(const Matrix& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw InvalidField(std::string(name) + " must be square");
  }
  const double scale = std::max(1.0, max_abs(m));
  const double asym = max_abs(m + m.transpose());
  if (!(asym <= 1e-14 * scale) || !m.allFinite()) {
    std::ostringstream os;
    os << name << " is not antisymmetric (max |M + M^T| = " << asym << ")";
    throw InvalidField(os.str());
  }
}

/// 2-norm condition number of Omega from its singular values.
double omega_condition(const Matrix& omega) {
  const Vector sv = Eigen::JacobiSVD<Matrix>(omega).singularValues();
  const double smallest = sv(sv.size() - 1);
  return smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
}

void require_regular(const FieldConfig& cfg, const PsiPhiPair& pp, const Tolerances& tol) {
  if (!(std::abs(pp.det_psi) >= tol.singular)) {
    std::ostringstream os;
    os << "Omega is singular: |det Psi| = " << std::abs(pp.det_psi) << " < " << tol.singular;
    throw SingularOmega(os.str(), pp.det_psi, omega_condition(build_omega(cfg).entries));
  }
}

} // namespace

FieldConfig::FieldConfig(Matrix eF, Matrix rG) : eF_(std::move(eF)), rG_(std::move(rG)) {
  if (eF_.rows() < 1) {
    throw InvalidField("dimension N must be at least 1");
  }
  if (eF_.rows() != rG_.rows() || eF_.cols() != rG_.cols()) {
    throw InvalidField("eF and rG must have the same shape");
  }
  require_antisymmetric(eF_, "eF");
  require_antisymmetric(rG_, "rG");
}

FieldConfig FieldConfig::canonical(std::size_t n) {
  const auto N = static_cast<Eigen::Index>(n);
  return FieldConfig(Matrix::Zero(N, N), Matrix::Zero(N, N));
}

FieldConfig FieldConfig::planar(double B, double C) {
  return FieldConfig(B * epsilon2(), C * epsilon2());
}

FieldConfig FieldConfig::spatial(const Eigen::Vector3d& B, const Eigen::Vector3d& C) {
  return FieldConfig(epsilon3_contract(B), epsilon3_contract(C));
}

OmegaMatrix build_omega(const FieldConfig& cfg) {
  const auto N = static_cast<Eigen::Index>(cfg.dim());
  Matrix o(2 * N, 2 * N);
  o.topLeftCorner(N, N) = -cfg.eF();
  o.topRightCorner(N, N).setIdentity();
  o.bottomLeftCorner(N, N) = -Matrix::Identity(N, N);
  o.bottomRightCorner(N, N) = cfg.rG();
  return {std::move(o)};
}

PsiPhiPair psi_phi(const FieldConfig& cfg) {
  const auto N = static_cast<Eigen::Index>(cfg.dim());
  const Matrix id = Matrix::Identity(N, N);
  PsiPhiPair pp;
  pp.psi = id - cfg.rG() * cfg.eF();
  pp.phi = id - cfg.eF() * cfg.rG();
  pp.det_psi = pp.psi.determinant();
  return pp;
}

double regularity(const FieldConfig& cfg) { return psi_phi(cfg).det_psi; }

Matrix poisson_matrix_dense(const OmegaMatrix& omega) {
  return -omega.entries.fullPivLu().inverse();
}

PoissonMatrix poisson_matrix(const FieldConfig& cfg, const Tolerances& tol) {
  const auto pp = psi_phi(cfg);
  require_regular(cfg, pp, tol);
  const auto N = static_cast<Eigen::Index>(cfg.dim());
  const Matrix psi_inv = pp.psi.fullPivLu().inverse();
  const Matrix phi_inv = pp.phi.fullPivLu().inverse();

  Matrix l(2 * N, 2 * N);
  l.topLeftCorner(N, N) = -psi_inv * cfg.rG();
  l.topRightCorner(N, N) = psi_inv;
  l.bottomLeftCorner(N, N) = -phi_inv;
  l.bottomRightCorner(N, N) = phi_inv * cfg.eF();

  // The blocks are antisymmetric in exact arithmetic; symmetrize away rounding.
  l = 0.5 * (l - l.transpose()).eval();
  const double residual = max_abs(l - poisson_matrix_dense(build_omega(cfg)));
  return {std::move(l), residual};
}

double bracket(const Vector& grad_f, const Vector& grad_g, const PoissonMatrix& lambda) {
  return grad_f.dot(lambda.entries * grad_g);
}

Vector hamiltonian_vector_field(const FieldConfig& cfg, const Vector& grad_f,
                                const Tolerances& tol) {
  const auto pp = psi_phi(cfg);
  require_regular(cfg, pp, tol);
  const auto N = static_cast<Eigen::Index>(cfg.dim());
  const Vector dq = grad_f.head(N);
  const Vector dp = grad_f.tail(N);
  Vector x(2 * N);
  x.head(N) = pp.psi.fullPivLu().solve(Vector(dp - cfg.rG() * dq));
  x.tail(N) = -pp.phi.fullPivLu().solve(Vector(dq - cfg.eF() * dp));
  return x;
}

} // namespace ncphase
