#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mixedh2 {

enum class ErrorCode {
  kInvalidArgument,
  kSingularResolvent,
  kGridMismatch,
  kNotStabilizable,
  kNonPositiveSpectrum,
  kNotPositive,
  kRootPairingFailure,
  kGammaTooSmall,
  kMaxIterExceeded,
  kNonConverged,
  kSolverStall,
  kBisectionBracketFailure,
  kFactorizationFailure,
  kTailTooFat,
  kIllConditioned,
  kIo,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable error code. Every failure raised by
/// the library goes through this type so front-ends can report the code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mixedh2
