#pragma once

#include <stdexcept>
#include <string>

namespace seedseg {

enum class ErrorCode {
  BadMagic,
  BadMaxval,
  Truncated,
  BadDimensions,
  BadVersion,
  DimensionMismatch,
  NonNumeric,
  OutOfBounds,
  InvalidArgument,
  AlreadyLabeled,
  ZeroLabel,
};

const char* to_string(ErrorCode code);

// Every failure surfaced by the library is an Error carrying a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace seedseg
