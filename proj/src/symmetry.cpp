#include "ncphase/symmetry.hpp"

#include "ncphase/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace ncphase {
namespace {

void require_rank(std::size_t n) {
  if (n < 2) {
    throw InvalidField("rotation generators need N >= 2");
  }
}

MomentumValue bilinear(const Vector& q, const Vector& p) {
  if (q.size() != p.size()) {
    throw InvalidField("q and p must have the same length");
  }
  MomentumValue j;
  j.components = p * q.transpose() - q * p.transpose();
  return j;
}

} // namespace

std::vector<RotationGenerator> generators(std::size_t n) {
  require_rank(n);
  std::vector<RotationGenerator> out;
  const auto dim = static_cast<Eigen::Index>(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      RotationGenerator g;
      g.alpha = a;
      g.beta = b;
      g.matrix = IntMatrix::Zero(dim, dim);
      g.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 1;
      g.matrix(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = -1;
      out.push_back(std::move(g));
    }
  }
  return out;
}

IntMatrix commutator(const IntMatrix& a, const IntMatrix& b) { return a * b - b * a; }

StructureConstants structure_constants_from_generators(std::size_t n) {
  const auto gens = generators(n);
  const std::size_t k = gens.size();
  StructureConstants f(k, std::vector<std::vector<int>>(k, std::vector<int>(k, 0)));
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t y = 0; y < k; ++y) {
      const IntMatrix c = commutator(gens[x].matrix, gens[y].matrix);
      // A combination of generators carries its coefficient of M_ab at entry (a, b).
      for (std::size_t z = 0; z < k; ++z) {
        f[x][y][z] = c(static_cast<Eigen::Index>(gens[z].alpha),
                       static_cast<Eigen::Index>(gens[z].beta));
      }
    }
  }
  return f;
}

MomentumValue momentum_canonical(const Vector& q, const Vector& p) { return bilinear(q, p); }

MomentumValue momentum_xi_pi(const Vector& zeta) {
  if (zeta.size() % 2 != 0) {
    throw InvalidField("zeta must have even length");
  }
  const Eigen::Index n = zeta.size() / 2;
  return bilinear(zeta.head(n), zeta.tail(n));
}

MomentumValue momentum_single_charge(const FieldConfig& cfg, Charge which, const Vector& z) {
  return momentum_xi_pi(darboux_single_charge(cfg, which).T * z);
}

Matrix momentum_quadratic_form(std::size_t n, std::size_t alpha, std::size_t beta) {
  const auto dim = static_cast<Eigen::Index>(n);
  Matrix m = Matrix::Zero(dim, dim);
  if (alpha != beta) {
    m(static_cast<Eigen::Index>(alpha), static_cast<Eigen::Index>(beta)) = 1.0;
    m(static_cast<Eigen::Index>(beta), static_cast<Eigen::Index>(alpha)) = -1.0;
  }
  Matrix a = Matrix::Zero(2 * dim, 2 * dim);
  a.topRightCorner(dim, dim) = m.transpose();
  a.bottomLeftCorner(dim, dim) = m;
  return a;
}

Matrix quadratic_bracket(const Matrix& a, const Matrix& b, const Matrix& lambda) {
  return a * lambda * b - b * lambda * a;
}

StructureConstants structure_constants_from_brackets(std::size_t n) {
  const auto gens = generators(n);
  const std::size_t k = gens.size();
  const Matrix lambda = canonical_j(n);
  const auto dim = static_cast<Eigen::Index>(n);
  std::vector<Matrix> forms;
  for (const auto& g : gens) {
    forms.push_back(momentum_quadratic_form(n, g.alpha, g.beta));
  }
  StructureConstants f(k, std::vector<std::vector<int>>(k, std::vector<int>(k, 0)));
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t y = 0; y < k; ++y) {
      const Matrix q = quadratic_bracket(forms[x], forms[y], lambda);
      Matrix rebuilt = Matrix::Zero(2 * dim, 2 * dim);
      for (std::size_t z = 0; z < k; ++z) {
        const double c = q(dim + static_cast<Eigen::Index>(gens[z].alpha),
                           static_cast<Eigen::Index>(gens[z].beta));
        if (c != std::round(c)) {
          throw Error("bracket coefficient is not an integer");
        }
        f[x][y][z] = static_cast<int>(c);
        rebuilt += c * forms[z];
      }
      if (rebuilt != q) {
        throw Error("bracket does not close on the momentum components");
      }
    }
  }
  return f;
}

InvarianceReport invariance_check(const FieldConfig& cfg, const Matrix& R, double tol) {
  const auto n = static_cast<Eigen::Index>(cfg.dim());
  if (R.rows() != n || R.cols() != n) {
    throw NotARotation("rotation has the wrong shape");
  }
  if (max_abs(R.transpose() * R - Matrix::Identity(n, n)) > 1e-10 || R.determinant() < 0.0) {
    throw NotARotation("matrix is not a proper rotation");
  }
  InvarianceReport rep;
  rep.residual_eF = max_abs(R.transpose() * cfg.eF() * R - cfg.eF());
  rep.residual_rG = max_abs(R * cfg.rG() * R.transpose() - cfg.rG());
  Matrix s = Matrix::Zero(2 * n, 2 * n);
  s.topLeftCorner(n, n) = R;
  s.bottomRightCorner(n, n) = R;
  const Matrix omega = build_omega(cfg).entries;
  rep.residual_omega = max_abs(s.transpose() * omega * s - omega);
  rep.symplectic = rep.residual_eF <= tol && rep.residual_rG <= tol;
  return rep;
}

Matrix rotation_from_angles(const Matrix& u) {
  if (u.rows() != u.cols() || max_abs(u + u.transpose()) > 0.0) {
    throw InvalidField("rotation angles must form an antisymmetric matrix");
  }
  // 1/2 u^ab M_ab summed over all pairs equals u itself.
  const Matrix x = u;
  return x.exp();
}

Matrix rotation_in_plane(std::size_t n, std::size_t alpha, std::size_t beta, double angle) {
  require_rank(n);
  const auto dim = static_cast<Eigen::Index>(n);
  Matrix u = Matrix::Zero(dim, dim);
  u(static_cast<Eigen::Index>(alpha), static_cast<Eigen::Index>(beta)) = angle;
  u(static_cast<Eigen::Index>(beta), static_cast<Eigen::Index>(alpha)) = -angle;
  return rotation_from_angles(u);
}

} // namespace ncphase
