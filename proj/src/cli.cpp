#include "ncphase/cli.hpp"

#include "ncphase/constrained.hpp"
#include "ncphase/darboux.hpp"
#include "ncphase/spectrum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace ncphase::cli {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ConfigError("field " + field + ": " + why);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    fail(where, "must be an object");
  }
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!ok.count(item.key())) {
      fail(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
    }
  }
}

std::string join(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

double number(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) {
    fail(join(where, key), "required");
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) {
    fail(join(where, key), "must be a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    fail(join(where, key), "must be finite");
  }
  return x;
}

double number_or(const json& obj, const std::string& where, const std::string& key, double fallback) {
  return obj.contains(key) ? number(obj, where, key) : fallback;
}

Vector vector_of(const json& v, const std::string& field, Eigen::Index length) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != length) {
    fail(field, "must be an array of " + std::to_string(length) + " numbers");
  }
  Vector out(length);
  for (Eigen::Index i = 0; i < length; ++i) {
    const auto& x = v.at(static_cast<std::size_t>(i));
    if (!x.is_number() || !std::isfinite(x.get<double>())) {
      fail(field + "[" + std::to_string(i) + "]", "must be a finite number");
    }
    out(i) = x.get<double>();
  }
  return out;
}

Matrix matrix_of(const json& v, const std::string& field, Eigen::Index rows) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != rows) {
    fail(field, "must be a " + std::to_string(rows) + " x " + std::to_string(rows) + " array");
  }
  Matrix out(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    out.row(i) = vector_of(v.at(static_cast<std::size_t>(i)), field + "[" + std::to_string(i) + "]", rows)
                     .transpose();
  }
  return out;
}

void parse_fields(const json& f, RunConfig& cfg) {
  only_keys(f, "fields", {"B", "C", "Bvec", "Cvec", "eF", "rG"});
  const bool planar = f.contains("B") || f.contains("C");
  const bool spatial = f.contains("Bvec") || f.contains("Cvec");
  const bool raw = f.contains("eF") || f.contains("rG");
  if (planar + spatial + raw != 1) {
    fail("fields", "give exactly one of {B, C}, {Bvec, Cvec} or {eF, rG}");
  }
  const auto n = static_cast<Eigen::Index>(cfg.n);
  try {
    if (planar) {
      if (cfg.n != 2) {
        fail("fields.B", "scalar fields need N = 2");
      }
      cfg.form = FieldForm::Planar;
      cfg.B = number(f, "fields", "B");
      cfg.C = number(f, "fields", "C");
      cfg.fields = FieldConfig::planar(cfg.B, cfg.C);
    } else if (spatial) {
      if (cfg.n != 3) {
        fail("fields.Bvec", "vector fields need N = 3");
      }
      for (const char* key : {"Bvec", "Cvec"}) {
        if (!f.contains(key)) {
          fail(std::string("fields.") + key, "required");
        }
      }
      cfg.form = FieldForm::Spatial;
      cfg.Bvec = vector_of(f.at("Bvec"), "fields.Bvec", 3);
      cfg.Cvec = vector_of(f.at("Cvec"), "fields.Cvec", 3);
      cfg.fields = FieldConfig::spatial(cfg.Bvec, cfg.Cvec);
    } else {
      for (const char* key : {"eF", "rG"}) {
        if (!f.contains(key)) {
          fail(std::string("fields.") + key, "required");
        }
      }
      cfg.form = FieldForm::Raw;
      cfg.fields = FieldConfig(matrix_of(f.at("eF"), "fields.eF", n), matrix_of(f.at("rG"), "fields.rG", n));
    }
  } catch (const InvalidField& e) {
    fail("fields", e.what());
  }
}

void parse_model(const json& m, RunConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(cfg.n);
  std::string kind = "harmonic";
  if (m.is_object() && m.contains("kind")) {
    if (!m.at("kind").is_string()) {
      fail("model.kind", "must be a string");
    }
    kind = m.at("kind").get<std::string>();
  }
  OscillatorModel model;
  if (kind == "harmonic") {
    only_keys(m, "model", {"kind", "m", "kappa", "hbar"});
    model = OscillatorModel::harmonic(number(m, "model", "m"), number(m, "model", "kappa"),
                                      number_or(m, "model", "hbar", 1.0));
  } else if (kind == "linear") {
    only_keys(m, "model", {"kind", "m", "E", "hbar"});
    const Vector e = m.contains("E") ? vector_of(m.at("E"), "model.E", n) : Vector::Zero(n);
    model = OscillatorModel::linear(number(m, "model", "m"), e, number_or(m, "model", "hbar", 1.0));
  } else if (kind == "quadratic") {
    only_keys(m, "model", {"kind", "hessian", "gradient", "hbar"});
    if (!m.contains("hessian")) {
      fail("model.hessian", "required");
    }
    const Matrix h = matrix_of(m.at("hessian"), "model.hessian", 2 * n);
    const Vector g =
        m.contains("gradient") ? vector_of(m.at("gradient"), "model.gradient", 2 * n) : Vector::Zero(2 * n);
    model = OscillatorModel::quadratic(h, g, number_or(m, "model", "hbar", 1.0));
  } else {
    fail("model.kind", "must be harmonic, linear or quadratic");
  }
  try {
    model.validate(cfg.n);
  } catch (const InvalidModel& e) {
    fail("model", e.what());
  }
  cfg.model = model;
}

void parse_time(const json& t, RunConfig& cfg) {
  only_keys(t, "time", {"t_final", "dt", "method"});
  TimeGrid grid;
  grid.t_final = number(t, "time", "t_final");
  grid.dt = number(t, "time", "dt");
  if (!(grid.t_final > 0.0)) {
    fail("time.t_final", "must be positive");
  }
  if (!(grid.dt > 0.0)) {
    fail("time.dt", "must be positive");
  }
  const double ratio = grid.t_final / grid.dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio) || steps > 1e8) {
    fail("time.dt", "t_final must be a whole multiple of dt (at most 1e8 steps)");
  }
  grid.steps = static_cast<std::size_t>(steps);
  if (t.contains("method")) {
    const auto& m = t.at("method");
    if (m == "exact") {
      grid.method = Method::Exact;
    } else if (m == "midpoint") {
      grid.method = Method::Midpoint;
    } else {
      fail("time.method", "must be exact or midpoint");
    }
  }
  cfg.time = grid;
}

void parse_tolerances(const json& t, RunConfig& cfg) {
  only_keys(t, "tolerances", {"singular", "rank_relative"});
  cfg.tol.singular = number_or(t, "tolerances", "singular", cfg.tol.singular);
  cfg.tol.rank_relative = number_or(t, "tolerances", "rank_relative", cfg.tol.rank_relative);
  if (!(cfg.tol.singular > 0.0)) {
    fail("tolerances.singular", "must be positive");
  }
  if (!(cfg.tol.rank_relative > 0.0)) {
    fail("tolerances.rank_relative", "must be positive");
  }
}

std::string line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(m(i, j) + 0.0);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(v(i) + 0.0);
  }
  return out;
}

std::string coordinate_name(std::size_t i, std::size_t n) {
  return (i < n ? "q" : "p") + std::to_string(i % n + 1);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

bool is_harmonic(const RunConfig& cfg) { return cfg.model.kind == PotentialKind::Harmonic; }

bool degenerate(const RunConfig& cfg) {
  return std::abs(regularity(cfg.fields)) < cfg.tol.singular;
}

Vector initial_state(const RunConfig& cfg) {
  if (!cfg.initial_state) {
    fail("initial_state", "required for this command");
  }
  return *cfg.initial_state;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    out += (i ? "," : "") + header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) {
        out += ',';
      }
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> state_header(std::size_t n) {
  std::vector<std::string> h{"t"};
  for (std::size_t i = 0; i < 2 * n; ++i) {
    h.push_back(coordinate_name(i, n));
  }
  h.push_back("H");
  return h;
}

json spectrum_json(const std::string& method, const SpectrumTable& table) {
  json j;
  j["method"] = method;
  j["hbar"] = table.hbar;
  j["frequencies"] = table.frequencies;
  j["ground_energy"] = table.ground_energy();
  json levels = json::array();
  for (const auto& l : table.levels) {
    levels.push_back({{"quanta", l.quanta}, {"energy", l.energy}});
  }
  j["levels"] = std::move(levels);
  return j;
}

bool parallel_to_z(const RunConfig& cfg) {
  return cfg.form == FieldForm::Spatial && cfg.Bvec.head<2>().isZero(0.0) && cfg.Cvec.head<2>().isZero(0.0);
}

json chain_json(const ConstraintChain& chain) {
  json j;
  j["status"] = to_string(chain.status);
  j["dimensions"] = chain.dimensions();
  j["terminal_index"] = chain.terminal_index;
  json cons = json::array();
  for (const auto& c : chain.constraints) {
    cons.push_back({{"rows", to_json(c.rows)}, {"offset", to_json(c.offset)}});
  }
  j["constraints"] = std::move(cons);
  auto ev = chain.flow_eigenvalues();
  std::vector<std::complex<double>> sorted(ev.data(), ev.data() + ev.size());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.imag() != b.imag() ? a.imag() < b.imag() : a.real() < b.real();
  });
  json eig = json::array();
  for (const auto& l : sorted) {
    eig.push_back({{"re", l.real()}, {"im", l.imag()}});
  }
  j["reduced_flow_eigenvalues"] = std::move(eig);
  j["gauge_dim"] = chain.gauge.cols();
  return j;
}

void emit(const RunConfig& cfg, const std::optional<std::string>& out_path, const std::string& text,
          std::ostream& out) {
  const auto path = out_path ? out_path : cfg.output;
  if (path) {
    write_atomic(*path, text);
  } else {
    out << text;
  }
}

std::string error_line(const std::string& kind, const json& extra, const std::string& message) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  for (const auto& item : extra.items()) {
    j[item.key()] = item.value();
  }
  return j.dump() + "\n";
}

} // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("syntax error at " + line_of(text, e.byte) + ": " + e.what());
  }
  only_keys(root, "", {"schema_version", "N", "fields", "model", "initial_state", "time", "tolerances", "output"});
  if (!root.contains("schema_version") || !root.at("schema_version").is_number_integer() ||
      root.at("schema_version").get<long long>() != kSchemaVersion) {
    fail("schema_version", "must be the integer " + std::to_string(kSchemaVersion));
  }
  if (!root.contains("N") || !root.at("N").is_number_integer() || root.at("N").get<long long>() < 1 ||
      root.at("N").get<long long>() > 64) {
    fail("N", "must be an integer between 1 and 64");
  }
  RunConfig cfg;
  cfg.n = static_cast<std::size_t>(root.at("N").get<long long>());
  const auto n = static_cast<Eigen::Index>(cfg.n);
  if (!root.contains("fields")) {
    fail("fields", "required");
  }
  parse_fields(root.at("fields"), cfg);
  if (!root.contains("model")) {
    fail("model", "required");
  }
  parse_model(root.at("model"), cfg);
  if (root.contains("initial_state")) {
    const auto& s = root.at("initial_state");
    only_keys(s, "initial_state", {"q", "p"});
    if (!s.contains("q") || !s.contains("p")) {
      fail("initial_state", "needs both q and p");
    }
    Vector z(2 * n);
    z.head(n) = vector_of(s.at("q"), "initial_state.q", n);
    z.tail(n) = vector_of(s.at("p"), "initial_state.p", n);
    cfg.initial_state = z;
  }
  if (root.contains("time")) {
    parse_time(root.at("time"), cfg);
  }
  if (root.contains("tolerances")) {
    parse_tolerances(root.at("tolerances"), cfg);
  }
  if (root.contains("output")) {
    if (!root.at("output").is_string() || root.at("output").get<std::string>().empty()) {
      fail("output", "must be a non-empty path string");
    }
    cfg.output = root.at("output").get<std::string>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read config file " + path);
  }
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

void apply_tolerance_override(RunConfig& cfg, const char* env_value) {
  if (env_value == nullptr) {
    return;
  }
  const std::string s(env_value);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || !(x > 0.0) || !std::isfinite(x)) {
    throw ConfigError("NCPHASE_TOL_SINGULAR must be a positive number, got '" + s + "'");
  }
  cfg.tol.singular = x;
}

std::string format_number(double x) {
  char buf[64];
  // + 0.0 folds -0 into 0 so signed zeros never leak into outputs.
  const auto res = std::to_chars(buf, buf + sizeof buf, x + 0.0);
  return std::string(buf, res.ptr);
}

std::string cmd_brackets(const RunConfig& cfg) {
  const auto n = cfg.n;
  const auto lambda = poisson_matrix(cfg.fields, cfg.tol);
  json j;
  j["N"] = n;
  j["det_psi"] = regularity(cfg.fields);
  j["omega"] = to_json(build_omega(cfg.fields).entries);
  j["lambda"] = to_json(lambda.entries);
  j["dense_residual"] = lambda.dense_residual;
  json table = json::object();
  for (std::size_t a = 0; a < 2 * n; ++a) {
    for (std::size_t b = a + 1; b < 2 * n; ++b) {
      table["{" + coordinate_name(a, n) + "," + coordinate_name(b, n) + "}"] =
          lambda.entries(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
  }
  j["brackets"] = std::move(table);
  return dump(j);
}

std::string cmd_darboux(const RunConfig& cfg) {
  // Fails with SingularOmega before any chart is attempted.
  poisson_matrix(cfg.fields, cfg.tol);
  const OmegaMatrix omega = build_omega(cfg.fields);
  const DarbouxMap generic = symplectic_gram_schmidt(omega, cfg.tol);
  std::optional<DarbouxMap> chosen;
  std::string method = "symplectic_gram_schmidt";
  json notes = json::array();
  const bool e_zero = cfg.fields.eF().isZero(0.0);
  const bool r_zero = cfg.fields.rG().isZero(0.0);
  try {
    if (cfg.form == FieldForm::Planar) {
      chosen = darboux_n2(cfg.B, cfg.C, cfg.tol.singular);
      method = "closed_form_n2";
    } else if (cfg.form == FieldForm::Spatial) {
      chosen = darboux_n3(cfg.Bvec, cfg.Cvec, cfg.tol.singular);
      method = "closed_form_n3";
    } else if (e_zero || r_zero) {
      chosen = darboux_single_charge(cfg.fields, r_zero ? Charge::ElectricOnly : Charge::DualOnly);
      method = r_zero ? "single_charge_electric" : "single_charge_dual";
    }
  } catch (const NegativeChi&) {
    notes.push_back("chi < 0: the closed form needs sqrt(chi), using symplectic Gram-Schmidt");
  }
  const DarbouxMap& map = chosen ? *chosen : generic;
  json j;
  j["method"] = method;
  j["notes"] = std::move(notes);
  j["T"] = to_json(map.T);
  j["Tinv"] = to_json(map.Tinv);
  j["residual"] = verify_darboux(map, omega);
  j["condition"] = map.condition;
  j["generic_residual"] = verify_darboux(generic, omega);
  j["equivalence_residual"] = equivalence_defect(map, generic);
  return dump(j);
}

std::string cmd_simulate(const RunConfig& cfg) {
  const Vector z0 = initial_state(cfg);
  if (!cfg.time) {
    fail("time", "required for simulate");
  }
  const auto& grid = *cfg.time;
  std::vector<std::vector<double>> rows;
  auto header = state_header(cfg.n);
  if (degenerate(cfg)) {
    const auto chain = gnh_chain(build_omega(cfg.fields), hamiltonian_hessian(cfg.model, cfg.n),
                                 hamiltonian_offset(cfg.model, cfg.n), cfg.tol);
    const auto states = propagate_on_chain(chain, z0, grid.dt, grid.steps);
    header.push_back("constraint_residual");
    for (std::size_t i = 0; i < states.size(); ++i) {
      std::vector<double> row{static_cast<double>(i) * grid.dt};
      row.insert(row.end(), states[i].data(), states[i].data() + states[i].size());
      row.push_back(energy(cfg.model, states[i]));
      row.push_back(constraint_residual(chain, states[i]));
      rows.push_back(std::move(row));
    }
    return csv(header, rows);
  }
  const auto traj = integrate(cfg.fields, cfg.model, z0, grid.dt, grid.steps, grid.method, cfg.tol);
  const bool with_lambda = !traj.samples.empty() && traj.samples.front().lambda3.has_value();
  if (with_lambda) {
    header.push_back("Lambda3");
  }
  for (const auto& s : traj.samples) {
    std::vector<double> row{s.t};
    row.insert(row.end(), s.z.data(), s.z.data() + s.z.size());
    row.push_back(s.H);
    if (with_lambda) {
      row.push_back(*s.lambda3);
    }
    rows.push_back(std::move(row));
  }
  return csv(header, rows);
}

std::string cmd_spectrum(const RunConfig& cfg, int nmax) {
  if (nmax < 0) {
    throw ConfigError("--nmax must be non-negative");
  }
  if (cfg.form == FieldForm::Planar && is_harmonic(cfg)) {
    const double chi = 1.0 + cfg.B * cfg.C;
    if (std::abs(chi) <= cfg.tol.singular) {
      const auto r = reduced_structure_n2(cfg.model, cfg.C);
      auto j = spectrum_json("degenerate_n2", spectrum_degenerate_n2(cfg.model, cfg.C, nmax));
      j["omega_r"] = r.omega_r;
      return dump(j);
    }
    if (chi > 0.0) {
      return dump(spectrum_json("closed_form_n2", spectrum_n2(cfg.model, cfg.B, cfg.C, nmax)));
    }
  }
  if (parallel_to_z(cfg) && is_harmonic(cfg) && 1.0 + cfg.Bvec(2) * cfg.Cvec(2) > cfg.tol.singular) {
    return dump(spectrum_json("parallel_n3",
                              spectrum_n3_parallel(cfg.model, cfg.Bvec(2), cfg.Cvec(2), nmax)));
  }
  const auto flow = linear_flow(cfg.fields, cfg.model, cfg.tol);
  return dump(spectrum_json("normal_modes", spectrum_from_flow(flow.M, cfg.model.hbar, nmax)));
}

std::string cmd_limit_scan(const RunConfig& cfg, double eps_min, double eps_max, int points) {
  if (cfg.form != FieldForm::Planar || !is_harmonic(cfg)) {
    fail("fields", "limit-scan needs N = 2 scalar fields and a harmonic model");
  }
  if (cfg.B == 0.0) {
    fail("fields.B", "limit-scan needs B != 0");
  }
  std::vector<double> grid;
  try {
    grid = geometric_grid(eps_min, eps_max, points);
  } catch (const InvalidModel& e) {
    throw ConfigError(std::string("scan grid: ") + e.what());
  }
  const Vector z0 = cfg.initial_state ? *cfg.initial_state : default_m2_state(cfg.model, cfg.B);
  const auto scan = chi_limit_scan(cfg.model, cfg.B, grid, z0);
  std::vector<std::vector<double>> rows;
  for (const auto& r : scan) {
    rows.push_back({r.epsilon, r.C, r.omega_plus, r.omega_minus, r.omega_r_target,
                    std::abs(r.omega_minus - r.omega_r_target), r.omega_plus * r.epsilon * r.epsilon,
                    r.fast_amplitude});
  }
  return csv({"epsilon", "C", "omega_plus", "omega_minus", "omega_r", "omega_minus_error",
              "omega_plus_eps2", "fast_amplitude"},
             rows);
}

std::string cmd_reduce(const RunConfig& cfg) {
  const auto chain = gnh_chain(build_omega(cfg.fields), hamiltonian_hessian(cfg.model, cfg.n),
                               hamiltonian_offset(cfg.model, cfg.n), cfg.tol);
  return dump(chain_json(chain));
}

void write_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw Error("cannot open " + tmp.string() + " for writing");
    }
    f << contents;
    f.flush();
    if (!f) {
      throw Error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename output into place: " + ec.message());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noncommutative phase-space toolkit"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::optional<std::string> out_path;
  int nmax = 3;
  double eps_min = 1e-3;
  double eps_max = 1e-1;
  int points = 7;

  const std::vector<std::pair<const char*, const char*>> commands{
      {"brackets", "Omega, Lambda and the coordinate bracket table (JSON)"},
      {"darboux", "Darboux chart and residuals (JSON)"},
      {"simulate", "Trajectory CSV"},
      {"spectrum", "Quantum level table (JSON)"},
      {"limit-scan", "chi -> 0 frequency and amplitude scan (CSV)"},
      {"reduce", "Constraint chain report (JSON)"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_path, "Output file (default: stdout)");
    if (std::string(name) == "spectrum") {
      sub->add_option("--nmax", nmax, "Highest occupation number per mode");
    }
    if (std::string(name) == "limit-scan") {
      sub->add_option("--eps-min", eps_min, "Smallest epsilon");
      sub->add_option("--eps-max", eps_max, "Largest epsilon");
      sub->add_option("--points", points, "Number of epsilon values");
    }
  }

  std::vector<const char*> argv{"ncphase"};
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    apply_tolerance_override(cfg, std::getenv("NCPHASE_TOL_SINGULAR"));
    std::string text;
    if (command == "brackets") {
      text = cmd_brackets(cfg);
    } else if (command == "darboux") {
      text = cmd_darboux(cfg);
    } else if (command == "simulate") {
      text = cmd_simulate(cfg);
    } else if (command == "spectrum") {
      text = cmd_spectrum(cfg, nmax);
    } else if (command == "limit-scan") {
      text = cmd_limit_scan(cfg, eps_min, eps_max, points);
    } else {
      text = cmd_reduce(cfg);
    }
    emit(cfg, out_path, text, out);
    return kOk;
  } catch (const ConfigError& e) {
    err << error_line("config", json::object(), e.what());
    return kConfigError;
  } catch (const SingularOmega& e) {
    const auto dim = kernel(build_omega(cfg.fields), cfg.tol).cols();
    err << error_line("singular", {{"kernel_dim", dim}, {"det_psi", e.det_psi()}}, e.what());
    return kSingular;
  } catch (const DegenerateChi& e) {
    const auto dim = kernel(build_omega(cfg.fields), cfg.tol).cols();
    err << error_line("singular", {{"kernel_dim", dim}}, e.what());
    return kSingular;
  } catch (const StepRejected& e) {
    err << error_line("step_rejected", {{"suggested_dt", e.suggested_dt()}}, e.what());
    return kStepRejected;
  } catch (const InconsistentSystem& e) {
    err << error_line("inconsistent", {{"dimensions", e.chain().dimensions()}}, e.what());
    return kInconsistent;
  } catch (const OffConstraint& e) {
    err << error_line("inconsistent", {{"residual", e.residual()}}, e.what());
    return kInconsistent;
  } catch (const std::exception& e) {
    err << error_line("config", json::object(), e.what());
    return kConfigError;
  }
}

} // namespace ncphase::cli
