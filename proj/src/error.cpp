#include "netvmo/error.hpp"

namespace netvmo {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSymmetryViolation: return "symmetry-violation";
    case ErrorCode::kAngleNearPi: return "angle-near-pi";
    case ErrorCode::kDegenerateMean: return "degenerate-mean";
    case ErrorCode::kBehindCamera: return "behind-camera";
    case ErrorCode::kDegenerateFeatureGeometry: return "degenerate-feature-geometry";
    case ErrorCode::kGraphSizeLimit: return "graph-size-limit";
    case ErrorCode::kDisconnectedGraph: return "disconnected-graph";
    case ErrorCode::kNoBaseline: return "no-baseline";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kSimulationAbort: return "simulation-abort";
  }
  return "unknown";
}

}  // namespace netvmo
