#pragma once

#include <stdexcept>
#include <string>

namespace vpfp {

/// Base class for every error raised by the library. The CLI maps the
/// subclasses onto exit codes (usage/config -> 2, numerical -> 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent configuration: grid mismatch, unknown keys, bad overrides.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its domain (k = 0, tau > t, dt < 0, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Requested quantity exceeds what the configuration can represent
/// (e.g. a velocity weight above the configured moment order).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Floating point failures: overflow, non-convergence, blow-up, truncation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// exp() of a Fourier multiplier would overflow at mode (k, eta).
class OverflowError : public NumericalError {
 public:
  OverflowError(const std::string& what, int k, double eta)
      : NumericalError(what), k_(k), eta_(eta) {}
  int k() const { return k_; }
  double eta() const { return eta_; }

 private:
  int k_;
  double eta_;
};

/// A time horizon beyond which e^{nu t} is not representable.
class HorizonError : public NumericalError {
 public:
  HorizonError(const std::string& what, double admissible_horizon)
      : NumericalError(what), horizon_(admissible_horizon) {}
  double admissible_horizon() const { return horizon_; }

 private:
  double horizon_;
};

/// Laplace integral cannot be truncated: the abscissa is left of the region
/// of convergence.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double admissible_abscissa)
      : NumericalError(what), abscissa_(admissible_abscissa) {}
  double admissible_abscissa() const { return abscissa_; }

 private:
  double abscissa_;
};

/// A scan or contour count is not converged at the requested resolution.
class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Contour inversion tail or window truncation above tolerance.
class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Penrose margin is not positive, the resolvent does not exist.
class StabilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// NaN/Inf appeared in the evolving state.
class BlowUpError : public NumericalError {
 public:
  BlowUpError(const std::string& what, double time)
      : NumericalError(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// F = mu + h is not positive on the physical grid.
class PositivityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A search cap (k_cap, T_cap, ...) influences the result.
class CapError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Fit window is empty or holds nonpositive samples.
class WindowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Degenerate least-squares problem.
class FitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace vpfp
