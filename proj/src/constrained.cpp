#include "ncphase/constrained.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ncphase {
namespace {

using cplx = std::complex<double>;

struct Split {
  Matrix range_left; // left singular vectors of the nonzero singular values
  Matrix null_left;  // complement in the column space
  Matrix null_right; // right null space
  Eigen::Index rank = 0;
};

/// Rank cut at max(rank_relative * sigma_max, floor); the floor keeps a
/// numerically zero matrix from being read as full rank.
Split split(const Matrix& a, const Tolerances& tol, double floor = 0.0) {
  Split s;
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  if (cols == 0 || rows == 0) {
    s.null_left = Matrix::Identity(rows, rows);
    s.null_right = Matrix::Identity(cols, cols);
    s.range_left = Matrix(rows, 0);
    return s;
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = std::max(tol.rank_relative * sv(0), floor);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cut && sv(r) > 0.0) {
    ++r;
  }
  s.rank = r;
  s.range_left = svd.matrixU().leftCols(r);
  s.null_left = svd.matrixU().rightCols(rows - r);
  s.null_right = svd.matrixV().rightCols(cols - r);
  return s;
}

/// Minimum-norm least-squares solution with the same rank cut as split().
Matrix pinv_solve(const Matrix& a, const Matrix& b, const Tolerances& tol, double floor) {
  if (a.cols() == 0 || a.rows() == 0) {
    return Matrix::Zero(a.cols(), b.cols());
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cut = std::max(tol.rank_relative * sv(0), floor);
  Vector inv = Vector::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut && sv(i) > 0.0) {
      inv(i) = 1.0 / sv(i);
    }
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose() * b;
}

double scale_of(const Matrix& m) { return std::max(1.0, max_abs(m)); }

} // namespace

Matrix kernel(const OmegaMatrix& omega, const Tolerances& tol) {
  return split(omega.entries, tol).null_right;
}

LinearConstraints secondary_constraints(const FieldConfig& cfg, const OscillatorModel& model,
                                        const Tolerances& tol) {
  const Matrix K = kernel(build_omega(cfg), tol);
  if (K.cols() == 0) {
    throw NoKernel("Omega is nondegenerate; there are no secondary constraints");
  }
  const Matrix S = hamiltonian_hessian(model, cfg.dim());
  const Vector g = hamiltonian_offset(model, cfg.dim());
  return {K.transpose() * S, K.transpose() * g};
}

double AffineSubspace::distance(const Vector& z) const {
  const Vector d = z - origin;
  return (d - basis * (basis.transpose() * d)).norm();
}

const char* to_string(ChainStatus status) {
  switch (status) {
  case ChainStatus::Consistent:
    return "consistent";
  case ChainStatus::Empty:
    return "empty";
  case ChainStatus::Inconsistent:
    return "inconsistent";
  }
  return "unknown";
}

std::vector<Eigen::Index> ConstraintChain::dimensions() const {
  std::vector<Eigen::Index> dims;
  for (const auto& s : subspaces) {
    dims.push_back(s.dim());
  }
  return dims;
}

Vector ConstraintChain::velocity(const Vector& z) const {
  const auto& m = terminal();
  if (m.dim() == 0) {
    return Vector::Zero(z.size());
  }
  const Vector w = m.basis.transpose() * (z - m.origin);
  return m.basis * (reduced_flow * w + reduced_drift);
}

Eigen::VectorXcd ConstraintChain::flow_eigenvalues() const {
  if (reduced_flow.size() == 0) {
    return {};
  }
  return reduced_flow.eigenvalues();
}

ConstraintChain gnh_chain(const OmegaMatrix& omega, const Matrix& S, const Vector& g,
                          const Tolerances& tol) {
  const Matrix& O = omega.entries;
  const Eigen::Index dim = O.rows();
  ConstraintChain chain;
  chain.subspaces.push_back({Matrix::Identity(dim, dim), Vector::Zero(dim)});

  const double scale = std::max({scale_of(O), scale_of(S), std::max(1.0, g.cwiseAbs().maxCoeff())});
  const double consistency_tol = 1e-9 * scale;
  const double rank_floor = tol.rank_relative * scale;

  for (Eigen::Index iter = 0; iter <= dim; ++iter) {
    const AffineSubspace current = chain.subspaces.back();
    const Matrix& V = current.basis;
    const Vector drive = S * current.origin + g;

    if (V.cols() == 0) {
      // A single point survives only if it is an equilibrium.
      if (drive.norm() > consistency_tol) {
        chain.status = ChainStatus::Inconsistent;
        chain.terminal_index = chain.subspaces.size() - 1;
        throw InconsistentSystem("terminal point is not an equilibrium", chain);
      }
      chain.status = ChainStatus::Empty;
      break;
    }

    // Solvability of Omega V y = -(S z + g) needs the drive orthogonal to
    // the left null space W of Omega V.
    const Matrix W = split(O * V, tol, rank_floor).null_left;
    if (W.cols() == 0) {
      break;
    }
    const Matrix cond = W.transpose() * S * V;
    const Vector off = W.transpose() * drive;
    if (max_abs(cond) <= consistency_tol && off.norm() <= consistency_tol) {
      break; // tangent dynamics exist on all of the current set
    }
    LinearConstraints step{W.transpose() * S, W.transpose() * g};
    chain.constraints.push_back(step);

    const Split cs = split(cond, tol, rank_floor);
    const Vector wp = pinv_solve(cond, -off, tol, rank_floor);
    if ((cond * wp + off).norm() > consistency_tol || (cs.rank == 0 && off.norm() > consistency_tol)) {
      chain.status = ChainStatus::Inconsistent;
      chain.terminal_index = chain.subspaces.size() - 1;
      throw InconsistentSystem("solvability condition is nowhere satisfied", chain);
    }
    chain.subspaces.push_back({V * cs.null_right, current.origin + V * wp});
  }

  chain.terminal_index = chain.subspaces.size() - 1;
  const auto& term = chain.terminal();
  if (term.dim() > 0) {
    const Matrix OV = O * term.basis;
    chain.reduced_flow = -pinv_solve(OV, S * term.basis, tol, rank_floor);
    chain.reduced_drift = -pinv_solve(OV, S * term.origin + g, tol, rank_floor);
    chain.gauge = term.basis * split(OV, tol, rank_floor).null_right;
  } else {
    chain.reduced_flow = Matrix(0, 0);
    chain.reduced_drift = Vector(0);
    chain.gauge = Matrix(dim, 0);
  }
  return chain;
}

double degenerate_omega_r(const OscillatorModel& model, double C) {
  const double mk = model.m * model.kappa;
  const double omega0 = std::sqrt(model.kappa / model.m);
  return -std::sqrt(mk) * C / (1.0 + mk * C * C) * omega0;
}

double degenerate_omega_r_from_B(const OscillatorModel& model, double B) {
  const double b = B / std::sqrt(model.m * model.kappa);
  return std::sqrt(model.kappa / model.m) * b / (1.0 + b * b);
}

double n2_constraint_residual(const OscillatorModel& model, double C, const Vector& z) {
  const cplx q{z(0), z(1)};
  const cplx p{z(2), z(3)};
  return std::abs(p / model.m + cplx{0.0, C * model.kappa} * q);
}

Vector degenerate_flow_n2(const OscillatorModel& model, double C, const Vector& z0, double t,
                          double on_tol) {
  if (model.kind != PotentialKind::Harmonic) {
    throw InvalidModel("degenerate_flow_n2 needs a harmonic potential");
  }
  model.validate(2);
  if (C == 0.0) {
    throw InvalidField("C = 0 cannot satisfy B C = -1");
  }
  const double res = n2_constraint_residual(model, C, z0);
  if (res > on_tol) {
    std::ostringstream os;
    os << "initial state is off the secondary constraint manifold (residual " << res << ")";
    throw OffConstraint(os.str(), res);
  }
  const cplx rot = std::exp(cplx{0.0, degenerate_omega_r(model, C) * t});
  const cplx q = rot * cplx{z0(0), z0(1)};
  const cplx p = rot * cplx{z0(2), z0(3)};
  Vector z(4);
  z << q.real(), q.imag(), p.real(), p.imag();
  return z;
}

ReducedOscillatorN2 reduced_structure_n2(const OscillatorModel& model, double C) {
  if (model.kind != PotentialKind::Harmonic) {
    throw InvalidModel("reduced_structure_n2 needs a harmonic potential");
  }
  model.validate(2);
  if (C == 0.0) {
    throw InvalidField("C = 0 cannot satisfy B C = -1");
  }
  const double mk = model.m * model.kappa;
  const double w = 1.0 + mk * C * C;
  ReducedOscillatorN2 r;
  r.C = C;
  r.B = -1.0 / C;
  r.omega_r = degenerate_omega_r(model, C);
  r.bracket_qqdag_imag = -2.0 * C / (w * w);
  r.hr_coefficient = w * model.kappa / 2.0;
  r.a_scale = w / std::sqrt(2.0 * std::abs(C));
  r.conjugated = r.B < 0.0;

  // {a, a^dagger} = a_scale^2 {q^dagger, q} for B > 0 and a_scale^2 {q, q^dagger} otherwise.
  const cplx q_qdag{0.0, r.bracket_qqdag_imag};
  r.bracket_a_adag = r.a_scale * r.a_scale * (r.conjugated ? q_qdag : -q_qdag);
  return r;
}

double constraint_residual(const ConstraintChain& chain, const Vector& z) {
  double worst = 0.0;
  for (const auto& c : chain.constraints) {
    if (c.rows.rows() > 0) {
      worst = std::max(worst, c.residual(z).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

std::vector<Vector> propagate_on_chain(const ConstraintChain& chain, const Vector& z0, double dt,
                                       std::size_t steps, double on_tol) {
  const auto& m = chain.terminal();
  const double miss = m.distance(z0);
  if (miss > on_tol) {
    throw OffConstraint("initial state is not on the final constraint set", miss);
  }
  const Eigen::Index k = m.dim();
  std::vector<Vector> out;
  out.reserve(steps + 1);
  if (k == 0) {
    out.assign(steps + 1, m.origin);
    return out;
  }
  // Augmented generator [[A, d], [0, 0]] carries the affine drift.
  Matrix gen = Matrix::Zero(k + 1, k + 1);
  gen.topLeftCorner(k, k) = chain.reduced_flow;
  gen.topRightCorner(k, 1) = chain.reduced_drift;
  const Matrix step = (dt * gen).exp();
  Vector w(k + 1);
  w.head(k) = m.basis.transpose() * (z0 - m.origin);
  w(k) = 1.0;
  out.push_back(z0);
  for (std::size_t i = 1; i <= steps; ++i) {
    w = step * w;
    out.push_back(m.origin + m.basis * w.head(k));
  }
  return out;
}

} // namespace ncphase
