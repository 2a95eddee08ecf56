#pragma once

#include "ncphase/dynamics.hpp"

#include <span>
#include <vector>

namespace ncphase {

struct SpectrumLevel {
  std::vector<int> quanta; // one occupation number per mode
  double energy = 0.0;
};

/// Levels sorted by energy (ties by quantum numbers).
struct SpectrumTable {
  std::vector<SpectrumLevel> levels;
  double hbar = 1.0;
  std::vector<double> frequencies; // positive mode frequencies, one per quantum number

  double ground_energy() const;
  /// Energy of a given occupation, hbar sum omega_i (n_i + 1/2).
  double energy_of(std::span<const int> quanta) const;
};

/// E(n+, n-) = hbar omega+ (n+ + 1/2) + hbar omega- (n- + 1/2), 0 <= n <= nmax.
SpectrumTable spectrum_n2(const OscillatorModel& model, double B, double C, int nmax);

/// E(n) = hbar |omega_r| (n + 1/2) on the reduced space (B = -1/C).
SpectrumTable spectrum_degenerate_n2(const OscillatorModel& model, double C, int nmax);

/// Parallel fields along z: modes omega+, omega-, omega3.
SpectrumTable spectrum_n3_parallel(const OscillatorModel& model, double B, double C, int nmax);

/// Normal-mode ladder of a stable quadratic flow: frequencies are the positive
/// imaginary parts of the eigenvalues of M = Lambda S (sorted descending).
/// Throws InvalidModel when M has eigenvalues off the imaginary axis.
SpectrumTable spectrum_from_flow(const Matrix& flow, double hbar, int nmax);

struct LimitScanRow {
  double epsilon = 0.0;
  double C = 0.0;
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  double omega_r_target = 0.0;
  double fast_amplitude = 0.0;
};

/// Default M2 initial state for the scan: q0 = 1, p0 = i m kappa q0 / B.
Vector default_m2_state(const OscillatorModel& model, double B);

/// At fixed B, C = (eps^2 - 1)/B so that chi = eps^2. fast_amplitude is the
/// max-abs phase-space size of the A(+) contribution for the M2 state z0.
std::vector<LimitScanRow> chi_limit_scan(const OscillatorModel& model, double B,
                                         std::span<const double> eps_grid, const Vector& z0);
std::vector<LimitScanRow> chi_limit_scan(const OscillatorModel& model, double B,
                                         std::span<const double> eps_grid);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

/// Intercept a of the least-squares fit y = a + b x^2.
double quadratic_intercept(std::span<const double> x, std::span<const double> y);

/// Geometric grid from eps_max down to eps_min (inclusive), strictly decreasing.
std::vector<double> geometric_grid(double eps_min, double eps_max, int points);

} // namespace ncphase
