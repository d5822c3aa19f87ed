#include "wkam/error.hpp"

namespace wkam {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kNoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::kEscape: return "ESCAPE";
    case ErrorCode::kResolution: return "RESOLUTION";
    case ErrorCode::kCrosscheckFail: return "CROSSCHECK_FAIL";
    case ErrorCode::kMaxIter: return "MAX_ITER";
    case ErrorCode::kMonotonicityFail: return "MONOTONICITY_FAIL";
    case ErrorCode::kNoStabilize: return "NO_STABILIZE";
    case ErrorCode::kFoldOnNode: return "FOLD_ON_NODE";
    case ErrorCode::kNotClosed: return "NOT_CLOSED";
    case ErrorCode::kUnsupportedDimension: return "UNSUPPORTED_DIMENSION";
    case ErrorCode::kIo: return "IO";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace wkam
