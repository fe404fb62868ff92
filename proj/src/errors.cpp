#include "lculab/errors.hpp"

namespace lculab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::ZeroProbability: return "ZeroProbability";
    case ErrorKind::AmplitudeMismatch: return "AmplitudeMismatch";
    case ErrorKind::NonRealState: return "NonRealState";
    case ErrorKind::DegenerateAngle: return "DegenerateAngle";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorKind::CollinearStates: return "CollinearStates";
    case ErrorKind::NoApproximation: return "NoApproximation";
    case ErrorKind::ZeroSum: return "ZeroSum";
    case ErrorKind::RetryLimit: return "RetryLimit";
    case ErrorKind::EmptyMarkedSet: return "EmptyMarkedSet";
    case ErrorKind::UnsupportedMultiplicity: return "UnsupportedMultiplicity";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::InputParseError: return "InputParseError";
  }
  return "Unknown";
}

}  // namespace lculab
