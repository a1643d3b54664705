#pragma once

#include <stdexcept>
#include <string>

namespace geoseg {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kEmptySeeds,
  kNonFinite,
  kBadMagic,
  kVersionMismatch,
  kUnsupportedDtype,
  kTruncated,
  kMalformedHeader,
  kDimensionOverflow,
  kIoFailure,
  kNumerical,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (CLI exit codes, HTTP statuses) can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace geoseg
