#include "ncphase/spectrum.hpp"

#include "ncphase/constrained.hpp"
#include "ncphase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace ncphase {
namespace {

SpectrumTable ladder(std::vector<double> freqs, double hbar, int nmax) {
  if (nmax < 0) {
    throw InvalidModel("nmax must be non-negative");
  }
  SpectrumTable table;
  table.hbar = hbar;
  table.frequencies = std::move(freqs);
  const std::size_t modes = table.frequencies.size();
  std::vector<int> n(modes, 0);
  while (true) {
    table.levels.push_back({n, table.energy_of(n)});
    std::size_t k = 0;
    while (k < modes && n[k] == nmax) {
      n[k++] = 0;
    }
    if (k == modes) {
      break;
    }
    ++n[k];
  }
  std::sort(table.levels.begin(), table.levels.end(), [](const auto& a, const auto& b) {
    return a.energy != b.energy ? a.energy < b.energy : a.quanta < b.quanta;
  });
  return table;
}

} // namespace

double SpectrumTable::ground_energy() const {
  return 0.5 * hbar * std::accumulate(frequencies.begin(), frequencies.end(), 0.0);
}

double SpectrumTable::energy_of(std::span<const int> quanta) const {
  double e = 0.0;
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    e += hbar * frequencies[i] * (quanta[i] + 0.5);
  }
  return e;
}

SpectrumTable spectrum_n2(const OscillatorModel& model, double B, double C, int nmax) {
  const auto f = n2_frequencies(model, B, C);
  return ladder({f.omega_plus, f.omega_minus}, model.hbar, nmax);
}

SpectrumTable spectrum_degenerate_n2(const OscillatorModel& model, double C, int nmax) {
  const auto r = reduced_structure_n2(model, C);
  return ladder({std::abs(r.omega_r)}, model.hbar, nmax);
}

SpectrumTable spectrum_n3_parallel(const OscillatorModel& model, double B, double C, int nmax) {
  const auto f = n3_parallel_model(model, B, C);
  return ladder({f.omega_plus, f.omega_minus, f.omega3}, model.hbar, nmax);
}

SpectrumTable spectrum_from_flow(const Matrix& flow, double hbar, int nmax) {
  const Eigen::VectorXcd ev = flow.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  std::vector<double> freqs;
  for (const auto& l : ev) {
    if (std::abs(l.real()) > 1e-9 * scale) {
      throw InvalidModel("flow has eigenvalues off the imaginary axis; no oscillator ladder");
    }
    if (l.imag() > 0.0) {
      freqs.push_back(l.imag());
    }
  }
  if (2 * freqs.size() != static_cast<std::size_t>(ev.size())) {
    throw InvalidModel("flow has zero modes; no oscillator ladder");
  }
  std::sort(freqs.begin(), freqs.end(), std::greater<>());
  return ladder(std::move(freqs), hbar, nmax);
}

Vector default_m2_state(const OscillatorModel& model, double B) {
  Vector z(4);
  z << 1.0, 0.0, 0.0, model.m * model.kappa / B;
  return z;
}

std::vector<LimitScanRow> chi_limit_scan(const OscillatorModel& model, double B,
                                         std::span<const double> eps_grid, const Vector& z0) {
  if (B == 0.0) {
    throw InvalidField("the limit scan needs B != 0");
  }
  std::vector<LimitScanRow> rows;
  rows.reserve(eps_grid.size());
  double previous = std::numeric_limits<double>::infinity();
  const double target = degenerate_omega_r_from_B(model, B);
  for (const double eps : eps_grid) {
    if (!(eps > 0.0) || !(eps < previous)) {
      throw InvalidModel("eps grid must be positive and strictly decreasing");
    }
    previous = eps;
    LimitScanRow row;
    row.epsilon = eps;
    row.C = (eps * eps - 1.0) / B;
    const auto f = n2_frequencies(model, B, row.C);
    row.omega_plus = f.omega_plus;
    row.omega_minus = f.omega_minus;
    row.omega_r_target = target;
    auto a = shift_amplitudes_n2(model, B, row.C, z0);
    a.minus_dag = 0.0;
    row.fast_amplitude = state_from_shift_n2(model, B, row.C, a).cwiseAbs().maxCoeff();
    rows.push_back(row);
  }
  return rows;
}

std::vector<LimitScanRow> chi_limit_scan(const OscillatorModel& model, double B,
                                         std::span<const double> eps_grid) {
  return chi_limit_scan(model, B, eps_grid, default_m2_state(model, B));
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double quadratic_intercept(std::span<const double> x, std::span<const double> y) {
  Matrix a(static_cast<Eigen::Index>(x.size()), 2);
  Vector b(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = 1.0;
    a(r, 1) = x[i] * x[i];
    b(r) = y[i];
  }
  return a.colPivHouseholderQr().solve(b)(0);
}

std::vector<double> geometric_grid(double eps_min, double eps_max, int points) {
  if (!(eps_min > 0.0) || !(eps_max >= eps_min) || points < 1) {
    throw InvalidModel("need 0 < eps_min <= eps_max and points >= 1");
  }
  if (points == 1) {
    return {eps_max};
  }
  if (eps_max == eps_min) {
    throw InvalidModel("eps_min == eps_max needs points == 1");
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double ratio = std::log(eps_min / eps_max) / (points - 1);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = eps_max * std::exp(ratio * i);
  }
  grid.front() = eps_max;
  grid.back() = eps_min;
  return grid;
}

} // namespace ncphase
