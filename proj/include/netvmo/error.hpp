#pragma once

#include <stdexcept>
#include <string>

namespace netvmo {

enum class ErrorCode {
  kSymmetryViolation,
  kAngleNearPi,
  kDegenerateMean,
  kBehindCamera,
  kDegenerateFeatureGeometry,
  kGraphSizeLimit,
  kDisconnectedGraph,
  kNoBaseline,
  kInvalidArgument,
  kParse,
  kValidation,
  kSimulationAbort,
};

const char* to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace netvmo
