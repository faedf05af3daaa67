#pragma once

#include <stdexcept>
#include <string>

namespace clv {

/// Malformed scenario/config input. CLI exit code 2.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An operation's stated precondition failed (ingredient residual, stage
/// ordering, jet depth). Carries the equation id when one applies.
/// CLI exit code 3.
struct PreconditionError : std::runtime_error {
  std::string equation;
  PreconditionError(std::string eq, const std::string& msg)
      : std::runtime_error(eq.empty() ? msg : eq + ": " + msg),
        equation(std::move(eq)) {}
};

/// Numerical singularity: singular grade coefficients, zero-value jet
/// division, point outside the chart domain. CLI exit code 4.
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structural misuse of the API (signature mismatch, bad index, grade out of
/// range). Not reachable from a schema-valid scenario.
struct UsageError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace clv
