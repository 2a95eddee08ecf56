#pragma once

#include "ncphase/core_forms.hpp"
#include "ncphase/dynamics.hpp"
#include "ncphase/errors.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ncphase::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kSingular = 2,
  kStepRejected = 3,
  kInconsistent = 4,
};

/// Schema violation; the message carries the line (syntax) or the field path.
class ConfigError : public Error {
public:
  using Error::Error;
};

enum class FieldForm { Planar, Spatial, Raw };

struct TimeGrid {
  double t_final = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  Method method = Method::Exact;
};

struct RunConfig {
  std::size_t n = 0;
  FieldForm form = FieldForm::Raw;
  double B = 0.0; // planar
  double C = 0.0;
  Eigen::Vector3d Bvec = Eigen::Vector3d::Zero(); // spatial
  Eigen::Vector3d Cvec = Eigen::Vector3d::Zero();
  FieldConfig fields = FieldConfig::canonical(1);
  OscillatorModel model;
  std::optional<Vector> initial_state;
  std::optional<TimeGrid> time;
  Tolerances tol;
  std::optional<std::string> output;
};

/// Parses and validates a JSON config. Throws ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Applies NCPHASE_TOL_SINGULAR when set (value passed explicitly for testing).
void apply_tolerance_override(RunConfig& cfg, const char* env_value);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double x);

std::string cmd_brackets(const RunConfig& cfg);
std::string cmd_darboux(const RunConfig& cfg);
std::string cmd_simulate(const RunConfig& cfg);
std::string cmd_spectrum(const RunConfig& cfg, int nmax);
std::string cmd_limit_scan(const RunConfig& cfg, double eps_min, double eps_max, int points);
std::string cmd_reduce(const RunConfig& cfg);

/// Writes to a sibling temporary file and renames it over path.
void write_atomic(const std::string& path, const std::string& contents);

/// Full command line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ncphase::cli
