#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wkam {

enum class ErrorCode {
  kInvalidArgument,
  kNoConvergence,
  kEscape,
  kResolution,
  kCrosscheckFail,
  kMaxIter,
  kMonotonicityFail,
  kNoStabilize,
  kFoldOnNode,
  kNotClosed,
  kUnsupportedDimension,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Base exception of the library. The code identifies the failure class so
/// callers (the verifier, the CLI) can react without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wkam
