#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lculab {

/// Failure categories shared by every module. The CLI maps each one to a
/// distinct process exit code.
enum class ErrorKind {
  InvalidArgument,
  ZeroVector,
  DimMismatch,
  NotUnitary,
  NotHermitian,
  ZeroProbability,
  AmplitudeMismatch,
  NonRealState,
  DegenerateAngle,
  NumericalFailure,
  BranchAmbiguity,
  CollinearStates,
  NoApproximation,
  ZeroSum,
  RetryLimit,
  EmptyMarkedSet,
  UnsupportedMultiplicity,
  ConfigError,
  InputParseError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the integer-iterate route when no power within the scan limit
/// lands inside the tolerance. Carries the best candidate found anyway.
class NoApproximationError : public Error {
 public:
  NoApproximationError(std::uint64_t best_k, double best_error, const std::string& message)
      : Error(ErrorKind::NoApproximation, message), best_k_(best_k), best_error_(best_error) {}

  std::uint64_t best_k() const noexcept { return best_k_; }
  double best_error() const noexcept { return best_error_; }

 private:
  std::uint64_t best_k_;
  double best_error_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace lculab
