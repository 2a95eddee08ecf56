#include "ncphase/dynamics.hpp"

#include "ncphase/darboux.hpp"
#include "ncphase/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace ncphase {
namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

cplx as_complex(double re, double im) { return {re, im}; }

void require_harmonic(const OscillatorModel& model) {
  if (model.kind != PotentialKind::Harmonic) {
    throw InvalidModel("this operation needs a harmonic potential");
  }
}

std::optional<DarbouxMap> closed_form_chart(const FieldConfig& cfg) {
  try {
    if (cfg.dim() == 2) {
      return darboux_n2(cfg.eF()(0, 1), cfg.rG()(0, 1));
    }
    if (cfg.dim() == 3) {
      return darboux_n3(pseudovector(cfg.eF()), pseudovector(cfg.rG()));
    }
  } catch (const Error&) {
  }
  return std::nullopt;
}

double lambda3_of(const DarbouxMap& chart, const Vector& z) {
  const Vector zeta = chart.T * z;
  const auto n = zeta.size() / 2;
  return zeta(0) * zeta(n + 1) - zeta(1) * zeta(n);
}

} // namespace

OscillatorModel OscillatorModel::harmonic(double m, double kappa, double hbar) {
  OscillatorModel model;
  model.m = m;
  model.kappa = kappa;
  model.kind = PotentialKind::Harmonic;
  model.hbar = hbar;
  return model;
}

OscillatorModel OscillatorModel::linear(double m, Vector E, double hbar) {
  OscillatorModel model;
  model.m = m;
  model.kappa = 0.0;
  model.kind = PotentialKind::Linear;
  model.E = std::move(E);
  model.hbar = hbar;
  return model;
}

OscillatorModel OscillatorModel::quadratic(Matrix hessian, Vector gradient, double hbar) {
  OscillatorModel model;
  model.kind = PotentialKind::Quadratic;
  model.hessian = std::move(hessian);
  model.gradient = std::move(gradient);
  model.hbar = hbar;
  return model;
}

void OscillatorModel::validate(std::size_t n) const {
  const auto N = static_cast<Eigen::Index>(n);
  if (!(hbar > 0.0)) {
    throw InvalidModel("hbar must be positive");
  }
  switch (kind) {
  case PotentialKind::Harmonic:
    if (!(m > 0.0) || !(kappa > 0.0)) {
      throw InvalidModel("harmonic model needs m > 0 and kappa > 0");
    }
    break;
  case PotentialKind::Linear:
    if (!(m > 0.0)) {
      throw InvalidModel("linear model needs m > 0");
    }
    if (E.size() != N) {
      throw InvalidModel("force vector E must have N components");
    }
    break;
  case PotentialKind::Quadratic:
    if (hessian.rows() != 2 * N || hessian.cols() != 2 * N || gradient.size() != 2 * N) {
      throw InvalidModel("quadratic model needs a 2N x 2N Hessian and a 2N gradient");
    }
    if (max_abs(hessian - hessian.transpose()) > 1e-14 * std::max(1.0, max_abs(hessian))) {
      throw InvalidModel("Hessian must be symmetric");
    }
    break;
  }
}

Matrix hamiltonian_hessian(const OscillatorModel& model, std::size_t n) {
  model.validate(n);
  const auto N = static_cast<Eigen::Index>(n);
  if (model.kind == PotentialKind::Quadratic) {
    return model.hessian;
  }
  Matrix S = Matrix::Zero(2 * N, 2 * N);
  if (model.kind == PotentialKind::Harmonic) {
    S.topLeftCorner(N, N) = model.kappa * Matrix::Identity(N, N);
  }
  S.bottomRightCorner(N, N) = Matrix::Identity(N, N) / model.m;
  return S;
}

Vector hamiltonian_offset(const OscillatorModel& model, std::size_t n) {
  model.validate(n);
  const auto N = static_cast<Eigen::Index>(n);
  switch (model.kind) {
  case PotentialKind::Quadratic:
    return model.gradient;
  case PotentialKind::Linear: {
    Vector g = Vector::Zero(2 * N);
    g.head(N) = -model.E;
    return g;
  }
  case PotentialKind::Harmonic:
    break;
  }
  return Vector::Zero(2 * N);
}

double energy(const OscillatorModel& model, const Vector& z) {
  const auto n = static_cast<std::size_t>(z.size() / 2);
  const Matrix S = hamiltonian_hessian(model, n);
  const Vector g = hamiltonian_offset(model, n);
  return 0.5 * z.dot(S * z) + g.dot(z);
}

LinearFlow linear_flow(const FieldConfig& cfg, const OscillatorModel& model, const Tolerances& tol) {
  const Matrix lambda = poisson_matrix(cfg, tol).entries;
  return {lambda * hamiltonian_hessian(model, cfg.dim()),
          lambda * hamiltonian_offset(model, cfg.dim())};
}

Vector equations_of_motion(const FieldConfig& cfg, const OscillatorModel& model, const Vector& z,
                           const Tolerances& tol) {
  const auto n = cfg.dim();
  const auto N = static_cast<Eigen::Index>(n);
  if (model.kind == PotentialKind::Quadratic) {
    const auto flow = linear_flow(cfg, model, tol);
    return flow.M * z + flow.k;
  }
  model.validate(n);
  Vector grad(2 * N);
  grad.head(N) = model.kind == PotentialKind::Harmonic ? Vector(model.kappa * z.head(N)) : Vector(-model.E);
  grad.tail(N) = z.tail(N) / model.m;
  return hamiltonian_vector_field(cfg, grad, tol);
}

N2Frequencies n2_frequencies(const OscillatorModel& model, double B, double C, double tol) {
  require_harmonic(model);
  model.validate(2);
  const double chi = 1.0 + C * B;
  if (std::abs(chi) <= tol) {
    throw DegenerateChi("n2_frequencies needs chi > 0");
  }
  if (chi < 0.0) {
    throw NegativeChi("n2_frequencies needs chi > 0");
  }
  const double mk = model.m * model.kappa;
  N2Frequencies f;
  f.chi = chi;
  f.u = 0.5 * (1.0 + std::sqrt(chi));
  f.b = B / std::sqrt(mk);
  f.c = C * std::sqrt(mk);
  const double four_u2 = 4.0 * f.u * f.u;
  f.m_prime = 1.0 / ((1.0 / model.m) * (f.u / chi) * (1.0 + f.c * f.c / four_u2));
  f.kappa_prime = model.kappa * (f.u / chi) * (1.0 + f.b * f.b / four_u2);
  f.m_omega0_prime = std::sqrt(f.m_prime * f.kappa_prime);
  f.omega0 = std::sqrt(model.kappa / model.m);
  const double bc = f.b - f.c;
  f.omega0_prime = f.omega0 / (2.0 * chi) * std::sqrt(bc * bc + 4.0 * chi);
  f.omegaL_prime = f.omega0 / (2.0 * chi) * bc;
  f.omega_plus = f.omega0_prime + f.omegaL_prime;
  f.omega_minus = f.omega0_prime - f.omegaL_prime;
  return f;
}

double m_omega0_prime_ratio_form(const OscillatorModel& model, double B, double C) {
  const auto f = n2_frequencies(model, B, C);
  const double four_u2 = 4.0 * f.u * f.u;
  return std::sqrt(model.m * model.kappa) *
         std::sqrt((1.0 + f.b * f.b / four_u2) / (1.0 + f.c * f.c / four_u2));
}

ShiftAmplitudes shift_amplitudes_n2(const OscillatorModel& model, double B, double C,
                                    const Vector& z0) {
  const auto f = n2_frequencies(model, B, C);
  const double mw = f.m_omega0_prime;
  const double bp = B / mw / (2.0 * f.u); // b' / 2u
  const double cp = C * mw / (2.0 * f.u); // c' / 2u
  const cplx q = as_complex(z0(0), z0(1));
  const cplx p = as_complex(z0(2), z0(3));
  const double su = std::sqrt(f.u);
  ShiftAmplitudes a;
  a.plus = 0.5 * su * (std::sqrt(mw) * (1.0 - bp) * q + I / std::sqrt(mw) * (1.0 + cp) * p);
  a.minus_dag = 0.5 * su * (std::sqrt(mw) * (1.0 + bp) * q - I / std::sqrt(mw) * (1.0 - cp) * p);
  return a;
}

Vector state_from_shift_n2(const OscillatorModel& model, double B, double C,
                           const ShiftAmplitudes& a) {
  const auto f = n2_frequencies(model, B, C);
  const double mw = f.m_omega0_prime;
  const double bp = B / mw / (2.0 * f.u);
  const double cp = C * mw / (2.0 * f.u);
  const double s = std::sqrt(f.u / f.chi);
  const cplx q = s / std::sqrt(mw) * ((1.0 - cp) * a.plus + (1.0 + cp) * a.minus_dag);
  const cplx p = I * s * std::sqrt(mw) * ((1.0 - bp) * a.minus_dag - (1.0 + bp) * a.plus);
  Vector z(4);
  z << q.real(), q.imag(), p.real(), p.imag();
  return z;
}

Vector closed_form_solution_n2(const OscillatorModel& model, double B, double C, const Vector& z0,
                               double t) {
  const auto f = n2_frequencies(model, B, C);
  auto a = shift_amplitudes_n2(model, B, C, z0);
  a.plus *= std::exp(-I * (f.omega_plus * t));
  a.minus_dag *= std::exp(I * (f.omega_minus * t));
  return state_from_shift_n2(model, B, C, a);
}

double angular_momentum(const Vector& zeta) { return zeta(0) * zeta(3) - zeta(1) * zeta(2); }

N3ParallelFrequencies n3_parallel_model(const OscillatorModel& model, double B, double C,
                                        double tol) {
  const auto f = n2_frequencies(model, B, C, tol);
  N3ParallelFrequencies r;
  r.m_perp = f.m_prime;
  r.kappa_perp = f.kappa_prime;
  r.omega3 = f.omega0;
  r.omega_perp = std::sqrt(f.kappa_prime / f.m_prime);
  r.omegaL_prime = f.omegaL_prime;
  r.omega_plus = r.omega_perp + r.omegaL_prime;
  r.omega_minus = r.omega_perp - r.omegaL_prime;
  return r;
}

Trajectory integrate(const FieldConfig& cfg, const OscillatorModel& model, const Vector& z0,
                     double dt, std::size_t steps, Method method, const Tolerances& tol) {
  if (!(dt > 0.0)) {
    throw InvalidModel("dt must be positive");
  }
  const auto flow = linear_flow(cfg, model, tol);
  const Eigen::Index dim = flow.M.rows();
  if (z0.size() != dim) {
    throw InvalidModel("initial state has the wrong dimension");
  }

  Matrix step_matrix;
  Vector step_shift;
  if (method == Method::Exact) {
    Matrix aug = Matrix::Zero(dim + 1, dim + 1);
    aug.topLeftCorner(dim, dim) = flow.M * dt;
    aug.topRightCorner(dim, 1) = flow.k * dt;
    const Matrix e = aug.exp();
    step_matrix = e.topLeftCorner(dim, dim);
    step_shift = e.topRightCorner(dim, 1);
  } else {
    const Matrix id = Matrix::Identity(dim, dim);
    Eigen::FullPivLU<Matrix> lu(id - 0.5 * dt * flow.M);
    if (!lu.isInvertible() || lu.rcond() < 1e-12) {
      const double rho = flow.M.eigenvalues().cwiseAbs().maxCoeff();
      const double suggested = rho > 0.0 ? 1.0 / rho : 0.5 * dt;
      std::ostringstream os;
      os << "implicit midpoint resolvent is singular at dt = " << dt << "; try dt <= "
         << suggested;
      throw StepRejected(os.str(), suggested);
    }
    step_matrix = lu.solve(Matrix(id + 0.5 * dt * flow.M));
    step_shift = lu.solve(Vector(dt * flow.k));
  }

  const auto chart = closed_form_chart(cfg);
  Trajectory traj;
  traj.samples.reserve(steps + 1);
  Vector z = z0;
  for (std::size_t n = 0; n <= steps; ++n) {
    PhaseState s;
    s.t = static_cast<double>(n) * dt;
    s.z = z;
    s.H = energy(model, z);
    if (chart) {
      s.lambda3 = lambda3_of(*chart, z);
    }
    traj.samples.push_back(std::move(s));
    z = step_matrix * z + step_shift;
  }
  return traj;
}

Eigen::Vector3d pseudovector(const Matrix& a) {
  return {a(1, 2), a(2, 0), a(0, 1)};
}

} // namespace ncphase
