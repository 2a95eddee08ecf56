#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncphase/constrained.hpp"
#include "ncphase/errors.hpp"
#include "ncphase/spectrum.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace ncphase;
using namespace testing_support;

namespace {

Matrix harmonic_hessian(double m, double kappa, Eigen::Index n) {
  Matrix s = Matrix::Zero(2 * n, 2 * n);
  s.topLeftCorner(n, n) = kappa * Matrix::Identity(n, n);
  s.bottomRightCorner(n, n) = Matrix::Identity(n, n) / m;
  return s;
}

/// Positive mode frequencies from the eigenvalues of the QR-built flow.
std::vector<double> oracle_frequencies(const FieldConfig& cfg, const Matrix& hessian) {
  const Matrix flow = poisson_by_qr(omega_by_entries(cfg.eF(), cfg.rG())) * hessian;
  const Eigen::VectorXcd ev = flow.eigenvalues();
  std::vector<double> w;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i).imag() > 0) {
      w.push_back(ev(i).imag());
    }
  }
  std::sort(w.rbegin(), w.rend());
  return w;
}

const SpectrumLevel* find_level(const SpectrumTable& t, std::vector<int> q) {
  for (const auto& l : t.levels) {
    if (l.quanta == q) {
      return &l;
    }
  }
  return nullptr;
}

void check_table_invariants(const SpectrumTable& t) {
  double sum = 0.0;
  for (double w : t.frequencies) {
    sum += w;
  }
  CHECK(t.ground_energy() == doctest::Approx(t.hbar * sum / 2).epsilon(1e-14));
  for (std::size_t i = 1; i < t.levels.size(); ++i) {
    CHECK(t.levels[i - 1].energy <= t.levels[i].energy);
  }
  // Raising any quantum number costs hbar omega_i wherever it happens.
  for (const auto& l : t.levels) {
    for (std::size_t i = 0; i < l.quanta.size(); ++i) {
      auto up = l.quanta;
      up[i] += 1;
      if (const auto* next = find_level(t, up)) {
        CHECK(std::abs(next->energy - l.energy - t.hbar * t.frequencies[i]) <= 1e-12);
      }
    }
  }
}

} // namespace

TEST_CASE("isotropic plane") {
  const auto t = spectrum_n2(OscillatorModel::harmonic(1, 1), 0, 0, 3);
  CHECK(t.levels.size() == 16);
  CHECK(t.ground_energy() == doctest::Approx(1.0).epsilon(1e-14));
  for (const auto& l : t.levels) {
    CHECK(l.energy == doctest::Approx(l.quanta[0] + l.quanta[1] + 1.0).epsilon(1e-14));
  }
  // equal frequencies make the first excited level twofold
  const std::vector<int> a{1, 0};
  const std::vector<int> b{0, 1};
  CHECK(t.energy_of(a) == t.energy_of(b));
  check_table_invariants(t);
}

TEST_CASE("planar fields") {
  const auto t = spectrum_n2(OscillatorModel::harmonic(1, 1), 1, 0, 4);
  CHECK(std::abs(t.ground_energy() - std::sqrt(5.0) / 2) <= 1e-12);
  REQUIRE(t.frequencies.size() == 2);
  CHECK(std::abs(t.frequencies[0] - (std::sqrt(5.0) + 1) / 2) <= 1e-12);
  CHECK(std::abs(t.frequencies[1] - (std::sqrt(5.0) - 1) / 2) <= 1e-12);
  check_table_invariants(t);

  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const double m = uniform(rng, 0.3, 3), kappa = uniform(rng, 0.3, 3);
    const double B = uniform(rng, -2, 2), C = uniform(rng, -2, 2);
    if (1 + B * C < 0.05) {
      continue;
    }
    const auto model = OscillatorModel::harmonic(m, kappa, uniform(rng, 0.5, 2));
    const auto table = spectrum_n2(model, B, C, 2);
    const auto ref = oracle_frequencies(FieldConfig::planar(B, C), harmonic_hessian(m, kappa, 2));
    REQUIRE(ref.size() == 2);
    std::vector<double> got = table.frequencies;
    std::sort(got.rbegin(), got.rend());
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(got[i] - ref[i]) <= 1e-9 * std::max(1.0, ref[i]));
    }
    check_table_invariants(table);
  }
}

TEST_CASE("degenerate ladder") {
  const auto t = spectrum_degenerate_n2(OscillatorModel::harmonic(1, 1), -1, 5);
  REQUIRE(t.levels.size() == 6);
  for (int n = 0; n <= 5; ++n) {
    CHECK(std::abs(t.levels[n].energy - 0.5 * (n + 0.5)) <= 1e-12);
  }
  const auto scaled = spectrum_degenerate_n2(OscillatorModel::harmonic(1, 1, 2.0), -1, 1);
  CHECK(std::abs(scaled.ground_energy() - 0.5) <= 1e-12);

  // The ladder spacing matches the reduced flow of the constraint chain.
  const auto model = OscillatorModel::harmonic(1.5, 0.8);
  const double C = -0.6;
  const auto cfg = FieldConfig::planar(-1 / C, C);
  const auto chain = gnh_chain(build_omega(cfg), hamiltonian_hessian(model, 2),
                               hamiltonian_offset(model, 2));
  const Eigen::VectorXcd ev = chain.flow_eigenvalues();
  REQUIRE(ev.size() == 2);
  const auto ladder = spectrum_degenerate_n2(model, C, 1);
  CHECK(std::abs(ladder.frequencies[0] - std::abs(ev(0).imag())) <= 1e-10);
  check_table_invariants(ladder);
}

TEST_CASE("three dimensions with parallel fields") {
  const auto iso = spectrum_n3_parallel(OscillatorModel::harmonic(1, 1), 0, 0, 2);
  for (const auto& l : iso.levels) {
    CHECK(l.energy == doctest::Approx(l.quanta[0] + l.quanta[1] + l.quanta[2] + 1.5).epsilon(1e-14));
  }
  const auto t = spectrum_n3_parallel(OscillatorModel::harmonic(1, 1), 1, 0, 2);
  CHECK(std::abs(t.ground_energy() - (std::sqrt(5.0) / 2 + 0.5)) <= 1e-12);
  check_table_invariants(t);

  const auto model = OscillatorModel::harmonic(1.3, 0.7);
  const auto table = spectrum_n3_parallel(model, 0.8, -0.4, 1);
  Eigen::Vector3d Bv, Cv;
  Bv << 0, 0, 0.8;
  Cv << 0, 0, -0.4;
  auto ref = oracle_frequencies(FieldConfig::spatial(Bv, Cv), harmonic_hessian(1.3, 0.7, 3));
  auto got = table.frequencies;
  std::sort(got.rbegin(), got.rend());
  REQUIRE(ref.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(got[i] - ref[i]) <= 1e-9);
  }
}

TEST_CASE("ladder from a flow matrix") {
  const auto cfg = FieldConfig::planar(1, 0);
  const auto flow = linear_flow(cfg, OscillatorModel::harmonic(1, 1));
  const auto t = spectrum_from_flow(flow.M, 1.0, 2);
  CHECK(std::abs(t.ground_energy() - std::sqrt(5.0) / 2) <= 1e-12);
  CHECK(t.frequencies[0] >= t.frequencies[1]);

  Matrix unstable = Matrix::Zero(2, 2);
  unstable << 0, 1, 1, 0;
  CHECK_THROWS_AS(spectrum_from_flow(unstable, 1.0, 1), InvalidModel);
  CHECK_THROWS_AS(spectrum_from_flow(Matrix::Zero(2, 2), 1.0, 1), InvalidModel);
}

TEST_CASE("approach to the degenerate point") {
  const auto model = OscillatorModel::harmonic(1, 1);
  const std::vector<double> eps{1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3};
  const auto rows = chi_limit_scan(model, 1.0, eps);
  REQUIRE(rows.size() == eps.size());

  const double target = degenerate_omega_r_from_B(model, 1.0);
  CHECK(std::abs(target - 0.5) <= 1e-15);
  std::vector<double> slow_err, fast_scaled, amp;
  for (const auto& r : rows) {
    CHECK(r.C == doctest::Approx((r.epsilon * r.epsilon - 1)).epsilon(1e-14));
    CHECK(r.omega_r_target == doctest::Approx(0.5).epsilon(1e-14));
    slow_err.push_back(std::abs(r.omega_minus - 0.5));
    fast_scaled.push_back(r.omega_plus * r.epsilon * r.epsilon);
    amp.push_back(r.fast_amplitude);
  }
  // the slow frequency converges quadratically in eps
  CHECK(std::abs(log_log_slope(eps, slow_err) - 2.0) <= 0.1);
  // the fast frequency diverges like 1/eps^2
  const double lo = *std::min_element(fast_scaled.begin() + 3, fast_scaled.end());
  const double hi = *std::max_element(fast_scaled.begin() + 3, fast_scaled.end());
  CHECK((hi - lo) / hi < 0.01);
  // the fast-mode content of an M2 state vanishes like eps^2
  CHECK(std::abs(log_log_slope(eps, amp) - 2.0) <= 0.1);

  // one row at eps = 1 is an ordinary planar evaluation
  const std::vector<double> one{1.0};
  const auto r1 = chi_limit_scan(model, 1.0, one).front();
  const auto f = n2_frequencies(model, 1.0, 0.0);
  CHECK(r1.omega_plus == f.omega_plus);
  CHECK(r1.omega_minus == f.omega_minus);

  const std::vector<double> rising{1e-3, 1e-2};
  CHECK_THROWS(chi_limit_scan(model, 1.0, rising));
}

TEST_CASE("fit helpers") {
  const std::vector<double> x{1, 2, 4, 8};
  std::vector<double> y, quad;
  for (double v : x) {
    y.push_back(3 * v * v * v);
    quad.push_back(0.25 + 2 * v * v);
  }
  CHECK(log_log_slope(x, y) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(quadratic_intercept(x, quad) == doctest::Approx(0.25).epsilon(1e-10));

  const auto g = geometric_grid(1e-3, 1e-1, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == doctest::Approx(1e-1));
  CHECK(g.back() == doctest::Approx(1e-3));
  CHECK(g[2] == doctest::Approx(1e-2).epsilon(1e-12));
  for (std::size_t i = 1; i < g.size(); ++i) {
    CHECK(g[i] < g[i - 1]);
  }
}
