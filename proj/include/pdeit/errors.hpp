#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdeit {

/// Requested frequency k = 0 is outside the validity of the trace and
/// field equations (the incident fields and kernels degenerate there).
struct ExcludedFrequencyError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Krylov iteration failed to reach the requested residual within the
/// iteration cap; carries the relative residual per iteration.
struct IllConditionedSystemError : std::runtime_error {
  IllConditionedSystemError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

/// The requested operation needs more smoothness than the field provides.
struct SmoothnessViolationError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A ground-truth computation failed; tests must not silently pass.
struct OracleFailureError : std::runtime_error {
  OracleFailureError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

/// A frequency-domain inversion solve did not converge; carries the
/// relative residual per iteration.
struct DbarFailureError : std::runtime_error {
  DbarFailureError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

/// A pointwise division in a reconstruction hit a vanishing denominator;
/// location is the offending spatial point.
struct DivisionSingularityError : std::runtime_error {
  DivisionSingularityError(const std::string& what, std::complex<double> where)
      : std::runtime_error(what), location(where) {}
  std::complex<double> location;
};

}  // namespace pdeit
