#include "triglab/common.hpp"

namespace triglab {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::DilationTooSmall: return "DilationTooSmall";
    case ErrorCode::TargetUnreachable: return "TargetUnreachable";
    case ErrorCode::InfeasibleRamp: return "InfeasibleRamp";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ClippingInfeasible: return "ClippingInfeasible";
    case ErrorCode::SynthFailed: return "SynthFailed";
    case ErrorCode::BadFile: return "BadFile";
  }
  return "UnknownError";
}

}  // namespace triglab
