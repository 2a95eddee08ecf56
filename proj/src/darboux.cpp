#include "ncphase/darboux.hpp"

#include "ncphase/errors.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace ncphase {
namespace {

double check_chi(double chi, double tol) {
  if (std::abs(chi) <= tol) {
    std::ostringstream os;
    os << "chi = " << chi << " is degenerate";
    throw DegenerateChi(os.str());
  }
  if (chi < 0.0) {
    std::ostringstream os;
    os << "chi = " << chi << " < 0 has no closed-form chart";
    throw NegativeChi(os.str());
  }
  return chi;
}

DarbouxMap finish(Matrix T, Matrix Tinv, const OmegaMatrix& omega) {
  DarbouxMap map{std::move(T), std::move(Tinv), 0.0, 0.0};
  map.residual = verify_darboux(map, omega);
  map.condition = map.T.lpNorm<1>() * map.Tinv.lpNorm<1>();
  return map;
}

} // namespace

N2Coefficients n2_coefficients(double B, double C, double tol) {
  const double chi = check_chi(1.0 + C * B, tol);
  return {chi, 0.5 * (1.0 + std::sqrt(chi))};
}

N3Coefficients n3_coefficients(double theta, double tol) {
  N3Coefficients k;
  k.theta = theta;
  k.chi = check_chi(1.0 + theta, tol);
  const double sq_chi = std::sqrt(k.chi);
  k.u = 0.5 * (1.0 + sq_chi);
  const double sq_u = std::sqrt(k.u);
  if (std::abs(theta) < kThetaSeriesThreshold) {
    const double t = theta;
    k.gamma = -1.0 / 8 + t * (7.0 / 128 + t * (-33.0 / 1024 + t * (715.0 / 32768)));
    k.gamma_prime = 3.0 / 8 + t * (-17.0 / 128 + t * (75.0 / 1024 + t * (-1573.0 / 32768)));
  } else {
    k.gamma = (1.0 - sq_u) / (theta * sq_u);
    k.gamma_prime = (sq_chi - sq_u) / (theta * sq_u);
  }
  return k;
}

DarbouxMap darboux_n2(double B, double C, double tol) {
  const auto k = n2_coefficients(B, C, tol);
  const double s = std::sqrt(k.u);
  const Matrix eps = epsilon2();
  const Matrix id = Matrix::Identity(2, 2);

  Matrix T(4, 4);
  T << s * id, -s * C / (2.0 * k.u) * eps,
       -s * B / (2.0 * k.u) * eps, s * id;

  const double f = std::sqrt(k.u / k.chi);
  Matrix Tinv(4, 4);
  Tinv << f * id, f * C / (2.0 * k.u) * eps,
          f * B / (2.0 * k.u) * eps, f * id;

  return finish(std::move(T), std::move(Tinv), build_omega(FieldConfig::planar(B, C)));
}

DarbouxMap darboux_n3(const Eigen::Vector3d& B, const Eigen::Vector3d& C, double tol) {
  const auto k = n3_coefficients(C.dot(B), tol);
  const double s = std::sqrt(k.u);
  const Matrix id = Matrix::Identity(3, 3);
  const Matrix eC = epsilon3_contract(C); // eps^{ijk} C_k
  const Matrix eB = epsilon3_contract(B); // eps_{klm} B^l, indexed (k, m) after the sign below
  const Matrix bc = B * C.transpose();    // B^i C_k
  const Matrix cb = C * B.transpose();    // C_k B^i

  // pi_k gets + 1/(2u) eps_klm B^l q^m; eps_klm B^l = -eps_kml B^l.
  const Matrix shear_q = -eB;

  Matrix T(6, 6);
  T << s * (id + k.gamma * bc), -s / (2.0 * k.u) * eC,
       s / (2.0 * k.u) * shear_q, s * (id + k.gamma * cb);

  const double f = s / std::sqrt(k.chi);
  Matrix Tinv(6, 6);
  Tinv << f * (id + k.gamma_prime * bc), f / (2.0 * k.u) * eC,
          -f / (2.0 * k.u) * shear_q, f * (id + k.gamma_prime * cb);

  return finish(std::move(T), std::move(Tinv), build_omega(FieldConfig::spatial(B, C)));
}

DarbouxMap darboux_single_charge(const FieldConfig& cfg, Charge which) {
  const bool e_zero = max_abs(cfg.eF()) == 0.0;
  const bool r_zero = max_abs(cfg.rG()) == 0.0;
  if (!e_zero && !r_zero) {
    throw BothChargesNonzero("darboux_single_charge needs eF = 0 or rG = 0");
  }
  const auto N = static_cast<Eigen::Index>(cfg.dim());
  Matrix T = Matrix::Identity(2 * N, 2 * N);
  if (which == Charge::ElectricOnly) {
    if (!r_zero) {
      throw BothChargesNonzero("electric-only chart requested with rG != 0");
    }
    // pi_j = p_j + 1/2 eF_ij q^i
    T.bottomLeftCorner(N, N) = 0.5 * cfg.eF().transpose();
  } else {
    if (!e_zero) {
      throw BothChargesNonzero("dual-only chart requested with eF != 0");
    }
    // xi^j = q^j + 1/2 rG^kj p_k
    T.topRightCorner(N, N) = 0.5 * cfg.rG().transpose();
  }
  Matrix Tinv = Matrix::Identity(2 * N, 2 * N);
  Tinv.bottomLeftCorner(N, N) = -T.bottomLeftCorner(N, N);
  Tinv.topRightCorner(N, N) = -T.topRightCorner(N, N);
  return finish(std::move(T), std::move(Tinv), build_omega(cfg));
}

DarbouxMap symplectic_gram_schmidt(const OmegaMatrix& omega, const Tolerances& tol) {
  const Matrix& O = omega.entries;
  const Eigen::Index dim = O.rows();
  if (dim % 2 != 0 || O.cols() != dim) {
    throw InvalidField("Omega must be square with even dimension");
  }
  const double det = O.determinant();
  if (!(std::abs(det) >= tol.singular)) {
    std::ostringstream os;
    os << "Omega is singular: |det Omega| = " << std::abs(det);
    throw SingularOmega(os.str(), det, std::numeric_limits<double>::infinity());
  }
  const Eigen::Index N = dim / 2;
  const double pivot_floor = tol.rank_relative * std::max(1.0, max_abs(O));

  Matrix remaining = Matrix::Identity(dim, dim);
  Matrix P(dim, dim);
  for (Eigen::Index step = 0; step < N; ++step) {
    const Matrix G = remaining.transpose() * O * remaining;
    Eigen::Index pi = 0;
    Eigen::Index pj = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < G.cols(); ++j) {
        if (std::abs(G(i, j)) > best) {
          best = std::abs(G(i, j));
          pi = i;
          pj = j;
        }
      }
    }
    if (best <= pivot_floor) {
      throw SingularOmega("symplectic Gram-Schmidt found a null direction", det,
                          std::numeric_limits<double>::infinity());
    }
    const Vector v = remaining.col(pi);
    const Vector w = remaining.col(pj) / G(pi, pj); // v^T O w = 1
    P.col(step) = v;
    P.col(N + step) = w;

    const Eigen::Index left = remaining.cols() - 2;
    if (left == 0) {
      break;
    }
    Matrix rest(dim, left);
    for (Eigen::Index c = 0, out = 0; c < remaining.cols(); ++c) {
      if (c == pi || c == pj) {
        continue;
      }
      Vector x = remaining.col(c);
      for (int pass = 0; pass < 2; ++pass) {
        const double wx = w.dot(O * x);
        const double vx = v.dot(O * x);
        x += wx * v - vx * w;
      }
      rest.col(out++) = x;
    }
    Eigen::HouseholderQR<Matrix> qr(rest);
    remaining = qr.householderQ() * Matrix::Identity(dim, left);
  }

  Eigen::FullPivLU<Matrix> lu(P);
  Matrix T = lu.inverse();
  return finish(std::move(T), std::move(P), omega);
}

double verify_darboux(const DarbouxMap& map, const OmegaMatrix& omega) {
  const auto n = static_cast<std::size_t>(map.T.rows() / 2);
  return max_abs(map.T.transpose() * canonical_j(n) * map.T - omega.entries);
}

double symplectic_defect(const Matrix& S) {
  const auto n = static_cast<std::size_t>(S.rows() / 2);
  const Matrix J = canonical_j(n);
  return max_abs(S.transpose() * J * S - J);
}

double equivalence_defect(const DarbouxMap& a, const DarbouxMap& b) {
  return symplectic_defect(a.T * b.Tinv);
}

} // namespace ncphase
