#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncphase/darboux.hpp"
#include "ncphase/errors.hpp"
#include "support.hpp"

using namespace ncphase;
using namespace testing_support;

namespace {

double residual_oracle(const Matrix& T, const Matrix& eF, const Matrix& rG) {
  const Eigen::Index n = eF.rows();
  return (T.transpose() * canonical(n) * T - omega_by_entries(eF, rG)).cwiseAbs().maxCoeff();
}

double inverse_defect(const DarbouxMap& m) {
  return (m.T * m.Tinv - Matrix::Identity(m.T.rows(), m.T.cols())).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("planar chart") {
  CHECK(darboux_n2(0, 0).T == Matrix::Identity(4, 4));

  const auto c = n2_coefficients(3, 1);
  CHECK(c.chi == 4.0);
  CHECK(c.u == 1.5);
  const auto map = darboux_n2(3, 1);
  CHECK(map.T(0, 0) == doctest::Approx(1.224744871391589).epsilon(1e-15));
  const auto cfg = FieldConfig::planar(3, 1);
  CHECK(residual_oracle(map.T, cfg.eF(), cfg.rG()) <= 1e-12);
  CHECK(map.residual <= 1e-12);
  CHECK(inverse_defect(map) <= 1e-12);
  CHECK(map.condition >= 1.0);

  CHECK_THROWS_AS(darboux_n2(2, -0.5), DegenerateChi);
  CHECK_THROWS_AS(darboux_n2(2, -1), NegativeChi);
}

TEST_CASE("spatial chart") {
  CHECK(max_abs(darboux_n3({0, 0, 0}, {0, 0, 0}).T - Matrix::Identity(6, 6)) == 0.0);

  const Eigen::Vector3d z{0, 0, 1};
  const auto map = darboux_n3(z, z);
  const auto cfg = FieldConfig::spatial(z, z);
  CHECK(residual_oracle(map.T, cfg.eF(), cfg.rG()) <= 1e-10);
  CHECK(inverse_defect(map) <= 1e-12);

  CHECK_THROWS_AS(darboux_n3({1, 0, 0}, {-1, 0, 0}), DegenerateChi);
  CHECK_THROWS_AS(darboux_n3({1, 0, 0}, {-2, 0, 0}), NegativeChi);
}

TEST_CASE("small theta coefficients") {
  // 40-digit reference values at theta = 1e-4 and 1e-8.
  const auto at4 = n3_coefficients(1e-4);
  CHECK(at4.gamma == doctest::Approx(-0.1249945315722438065).epsilon(1e-9));
  CHECK(at4.gamma_prime == doctest::Approx(0.3749867194823738743).epsilon(1e-9));

  const auto at8 = n3_coefficients(1e-8);
  CHECK(std::abs(at8.gamma - -0.125) <= 1e-6);
  CHECK(at8.gamma == doctest::Approx(-0.1249999994531250032).epsilon(1e-14));
  CHECK(at8.gamma_prime == doctest::Approx(0.3749999986718750073).epsilon(1e-14));

  const auto at0 = n3_coefficients(0.0);
  CHECK(at0.gamma == -0.125);
  CHECK(at0.gamma_prime == 0.375);

  // Both sides of the series switch agree.
  const auto below = n3_coefficients(0.999999e-6);
  const auto above = n3_coefficients(1.000001e-6);
  CHECK(below.gamma == doctest::Approx(above.gamma).epsilon(1e-9));
  CHECK(below.gamma_prime == doctest::Approx(above.gamma_prime).epsilon(1e-9));

  CHECK(n3_coefficients(0.5).gamma == doctest::Approx(-0.1037094256772184268).epsilon(1e-14));
  CHECK(n3_coefficients(-0.5).gamma_prime == doctest::Approx(0.4692662705396409131).epsilon(1e-14));

  const Eigen::Vector3d x{1, 0, 0};
  const auto map = darboux_n3(x, 1e-8 * x);
  const auto cfg = FieldConfig::spatial(x, 1e-8 * x);
  CHECK(residual_oracle(map.T, cfg.eF(), cfg.rG()) <= 1e-12);
}

TEST_CASE("single charge shears") {
  const auto zero = darboux_single_charge(FieldConfig::canonical(3), Charge::ElectricOnly);
  CHECK(zero.T == Matrix::Identity(6, 6));

  const auto cfg = FieldConfig::planar(1, 0);
  const auto e = darboux_single_charge(cfg, Charge::ElectricOnly);
  CHECK(residual_oracle(e.T, cfg.eF(), cfg.rG()) <= 1e-12);
  // pi_k = p_k + A_k with A_k = 1/2 eF_ik q^i: pi_1 = p_1 - q^2/2, pi_2 = p_2 + q^1/2.
  CHECK(e.T(2, 1) == -0.5);
  CHECK(e.T(3, 0) == 0.5);
  CHECK(e.T.topRows(2) == Matrix::Identity(4, 4).topRows(2));

  const auto cfg3 = FieldConfig::spatial({0, 0, 0}, {0, 0, 1});
  const auto r = darboux_single_charge(cfg3, Charge::DualOnly);
  CHECK(residual_oracle(r.T, cfg3.eF(), cfg3.rG()) <= 1e-12);
  CHECK(r.T.bottomRows(3) == Matrix::Identity(6, 6).bottomRows(3));
  CHECK(r.T.topLeftCorner(3, 3) == Matrix::Identity(3, 3));
  CHECK(inverse_defect(r) == 0.0);

  CHECK_THROWS_AS(darboux_single_charge(FieldConfig::planar(1, 1), Charge::ElectricOnly), BothChargesNonzero);
  CHECK_THROWS_AS(darboux_single_charge(FieldConfig::planar(1, 0), Charge::DualOnly), BothChargesNonzero);
}

TEST_CASE("planar chart reduces to the shears") {
  const auto e = darboux_single_charge(FieldConfig::planar(1.7, 0), Charge::ElectricOnly);
  CHECK(max_abs(darboux_n2(1.7, 0).T - e.T) <= 1e-12);
  const auto r = darboux_single_charge(FieldConfig::planar(0, -0.4), Charge::DualOnly);
  CHECK(max_abs(darboux_n2(0, -0.4).T - r.T) <= 1e-12);
}

TEST_CASE("parallel fields leave the third axis alone") {
  const auto map = darboux_n3({0, 0, 0.8}, {0, 0, 1.3});
  for (Eigen::Index k = 0; k < 6; ++k) {
    const double expected = (k == 2 || k == 5) ? 1.0 : 0.0;
    CHECK(std::abs(map.T(2, k) - (k == 2 ? 1.0 : 0.0)) <= 1e-12);
    CHECK(std::abs(map.T(5, k) - (k == 5 ? 1.0 : 0.0)) <= 1e-12);
    CHECK(std::abs(map.T(k, 2) - (k == 2 ? expected : 0.0)) <= 1e-12);
    CHECK(std::abs(map.T(k, 5) - (k == 5 ? expected : 0.0)) <= 1e-12);
  }
}

TEST_CASE("generic orthogonalization") {
  const auto canon = symplectic_gram_schmidt(build_omega(FieldConfig::canonical(3)));
  CHECK(canon.residual <= 1e-12);

  std::mt19937_64 rng(77);
  int done = 0;
  while (done < 100) {
    const FieldConfig cfg(random_antisymmetric(rng, 4, 1.0), random_antisymmetric(rng, 4, 1.0));
    if (std::abs(regularity(cfg)) <= 0.1) {
      continue;
    }
    ++done;
    const auto map = symplectic_gram_schmidt(build_omega(cfg));
    CHECK(residual_oracle(map.T, cfg.eF(), cfg.rG()) <= 1e-8);
    CHECK(inverse_defect(map) <= 1e-10);
  }

  const auto gs = symplectic_gram_schmidt(build_omega(FieldConfig::planar(3, 1)));
  CHECK(symplectic_defect(gs.T * darboux_n2(3, 1).Tinv) <= 1e-8);
  CHECK(equivalence_defect(gs, darboux_n2(3, 1)) <= 1e-8);

  // chi < 0 has no closed form but is still nondegenerate.
  const auto neg = FieldConfig::planar(2, -1);
  CHECK(residual_oracle(symplectic_gram_schmidt(build_omega(neg)).T, neg.eF(), neg.rG()) <= 1e-8);

  CHECK_THROWS_AS(symplectic_gram_schmidt(build_omega(FieldConfig::planar(1, -1))), SingularOmega);
}

TEST_CASE("residual metric") {
  DarbouxMap id{Matrix::Identity(4, 4), Matrix::Identity(4, 4)};
  CHECK(verify_darboux(id, build_omega(FieldConfig::canonical(2))) == 0.0);
  CHECK(verify_darboux(id, build_omega(FieldConfig::planar(1, 0))) == 1.0);
  CHECK(verify_darboux(darboux_n2(3, 1), build_omega(FieldConfig::planar(3, 1))) <= 1e-12);
}

TEST_CASE("random closed-form charts") {
  std::mt19937_64 rng(4242);
  int planar = 0;
  while (planar < 500) {
    const double B = uniform(rng, -3, 3);
    const double C = uniform(rng, -3, 3);
    if (1.0 + B * C <= 1e-3) {
      continue;
    }
    ++planar;
    const auto map = darboux_n2(B, C);
    const auto cfg = FieldConfig::planar(B, C);
    CHECK(residual_oracle(map.T, cfg.eF(), cfg.rG()) <= 1e-9);
    CHECK(inverse_defect(map) <= 1e-10);
  }
  int spatial = 0;
  while (spatial < 500) {
    const Eigen::Vector3d B = random_vector(rng, 3, 2.0);
    const Eigen::Vector3d C = random_vector(rng, 3, 2.0);
    if (1.0 + B.dot(C) <= 1e-3) {
      continue;
    }
    ++spatial;
    const auto map = darboux_n3(B, C);
    const auto cfg = FieldConfig::spatial(B, C);
    CHECK(residual_oracle(map.T, cfg.eF(), cfg.rG()) <= 1e-9);
    CHECK(inverse_defect(map) <= 1e-10);

    // Linear observables keep their brackets under the chart.
    const Vector a = random_vector(rng, 6);
    const Vector b = random_vector(rng, 6);
    const Matrix lambda = poisson_by_qr(omega_by_entries(cfg.eF(), cfg.rG()));
    const Vector ta = map.Tinv.transpose() * a;
    const Vector tb = map.Tinv.transpose() * b;
    const double via_lambda = a.dot(lambda * b);
    const double via_chart = ta.dot(canonical(3) * tb);
    CHECK(std::abs(via_lambda - via_chart) <= 1e-9 * std::max(1.0, std::abs(via_lambda)));
  }
}
