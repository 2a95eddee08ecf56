#pragma once

#include <stdexcept>
#include <string>

namespace ncphase {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Field matrices are not antisymmetric, wrong shape, or N < 1.
class InvalidField : public Error {
public:
  using Error::Error;
};

/// Omega is (numerically) singular; the presymplectic route applies.
class SingularOmega : public Error {
public:
  SingularOmega(const std::string& what, double det_psi, double condition)
      : Error(what), det_psi_(det_psi), condition_(condition) {}
  double det_psi() const noexcept { return det_psi_; }
  /// 2-norm condition number of Omega (infinite when exactly singular).
  double condition() const noexcept { return condition_; }

private:
  double det_psi_;
  double condition_;
};

/// chi = 1 + C.B vanishes (within tolerance).
class DegenerateChi : public Error {
public:
  using Error::Error;
};

/// chi < 0: closed-form Darboux maps need sqrt(chi).
class NegativeChi : public Error {
public:
  using Error::Error;
};

class BothChargesNonzero : public Error {
public:
  using Error::Error;
};

class NoKernel : public Error {
public:
  using Error::Error;
};

class OffConstraint : public Error {
public:
  OffConstraint(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

class StepRejected : public Error {
public:
  StepRejected(const std::string& what, double suggested_dt) : Error(what), suggested_dt_(suggested_dt) {}
  double suggested_dt() const noexcept { return suggested_dt_; }

private:
  double suggested_dt_;
};

class NotARotation : public Error {
public:
  using Error::Error;
};

class InvalidModel : public Error {
public:
  using Error::Error;
};

} // namespace ncphase
