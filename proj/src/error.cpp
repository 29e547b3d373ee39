#include "seedseg/error.hpp"

namespace seedseg {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadMagic: return "bad-magic";
    case ErrorCode::BadMaxval: return "bad-maxval";
    case ErrorCode::Truncated: return "truncated";
    case ErrorCode::BadDimensions: return "bad-dimensions";
    case ErrorCode::BadVersion: return "bad-version";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::NonNumeric: return "non-numeric";
    case ErrorCode::OutOfBounds: return "out-of-bounds";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::AlreadyLabeled: return "already-labeled";
    case ErrorCode::ZeroLabel: return "zero-label";
  }
  return "unknown";
}

}  // namespace seedseg
