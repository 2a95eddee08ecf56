#pragma once

#include "ncphase/core_forms.hpp"
#include "ncphase/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace testing_support {

using ncphase::Matrix;
using ncphase::Vector;

inline Matrix random_antisymmetric(std::mt19937_64& rng, Eigen::Index n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      a(i, j) = u(rng);
      a(j, i) = -a(i, j);
    }
  }
  return a;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = u(rng);
  }
  return v;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Omega assembled entry by entry from the defining two-form, without the
/// library's block helper.
inline Matrix omega_by_entries(const Matrix& eF, const Matrix& rG) {
  const Eigen::Index n = eF.rows();
  Matrix o = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      o(i, j) = -eF(i, j);
      o(n + i, n + j) = rG(i, j);
    }
    o(i, n + i) = 1.0;
    o(n + i, i) = -1.0;
  }
  return o;
}

/// -Omega^{-1} by Householder QR.
inline Matrix poisson_by_qr(const Matrix& omega) {
  return -omega.colPivHouseholderQr().inverse();
}

inline Matrix canonical(Eigen::Index n) {
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return j;
}

} // namespace testing_support
