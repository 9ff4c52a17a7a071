#include "mixedh2/errors.hpp"

namespace mixedh2 {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSingularResolvent: return "SingularResolvent";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kNotStabilizable: return "NotStabilizable";
    case ErrorCode::kNonPositiveSpectrum: return "NonPositiveSpectrum";
    case ErrorCode::kNotPositive: return "NotPositive";
    case ErrorCode::kRootPairingFailure: return "RootPairingFailure";
    case ErrorCode::kGammaTooSmall: return "GammaTooSmall";
    case ErrorCode::kMaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::kNonConverged: return "NonConverged";
    case ErrorCode::kSolverStall: return "SolverStall";
    case ErrorCode::kBisectionBracketFailure: return "BisectionBracketFailure";
    case ErrorCode::kFactorizationFailure: return "FactorizationFailure";
    case ErrorCode::kTailTooFat: return "TailTooFat";
    case ErrorCode::kIllConditioned: return "IllConditioned";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace mixedh2
