#pragma once

#include <stdexcept>
#include <string>

namespace urnlab {

/// Failure categories shared by every module. The numeric values are part of
/// the C ABI (see include/urnlab/urnlab.h) and must not be reordered.
enum class ErrorCode : int {
  InvalidArgument = 1,
  Domain = 2,
  SampleSize = 3,
  InvalidSize = 4,
  ReinforcementRange = 5,
  Capability = 6,
  CostGuard = 7,
  Convergence = 8,
  Case = 9,
  Hypothesis = 10,
  Integration = 11,
  Config = 12,
  Io = 13,
  Internal = 14,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const char* message) {
  if (!condition) raise(code, message);
}

}  // namespace urnlab
