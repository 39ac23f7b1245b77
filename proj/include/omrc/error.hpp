#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace omrc {

/// Failure categories raised across the toolkit.
enum class ErrorKind {
  kDimensionMismatch,
  kNonFinite,
  kNonStabilizable,
  kSingular,
  kNoConvergence,
  kOverflow,
  kRankDeficient,
  kOutOfRange,
  kNotObservable,
  kNotControllable,
  kUnsupportedMultiOutput,
  kInvalidBounds,
  kNotOnGrid,
  kDiverged,
  kConfigError,
  kEmptyWindow,
  kIoError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_error(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace omrc
