#include "urnlab/error.hpp"

namespace urnlab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::SampleSize: return "sample-size";
    case ErrorCode::InvalidSize: return "invalid-size";
    case ErrorCode::ReinforcementRange: return "reinforcement-range";
    case ErrorCode::Capability: return "capability";
    case ErrorCode::CostGuard: return "cost-guard";
    case ErrorCode::Convergence: return "convergence";
    case ErrorCode::Case: return "case";
    case ErrorCode::Hypothesis: return "hypothesis";
    case ErrorCode::Integration: return "integration";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

void raise(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace urnlab
