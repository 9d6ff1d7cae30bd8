#pragma once

#include <stdexcept>
#include <string>

namespace thirdq {

enum class ErrorCode {
  kInvalidArgument = 1,
  kDimensionMismatch,
  kNearDefective,
  kPairingFailure,
  kNonUniqueNess,
  kSizeCap,
  kDegenerateKernel,
  kTauZero,
  kBranchAmbiguity,
  kIo,
  kParse,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Numerical failures (as opposed to bad input) map to a distinct CLI exit code.
  bool numerical() const noexcept {
    switch (code_) {
      case ErrorCode::kNearDefective:
      case ErrorCode::kPairingFailure:
      case ErrorCode::kNonUniqueNess:
      case ErrorCode::kDegenerateKernel:
      case ErrorCode::kTauZero:
      case ErrorCode::kBranchAmbiguity:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorCode code_;
};

}  // namespace thirdq
