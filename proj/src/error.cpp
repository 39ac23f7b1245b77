#include "omrc/error.hpp"

namespace omrc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kNonFinite: return "NonFinite";
    case ErrorKind::kNonStabilizable: return "NonStabilizable";
    case ErrorKind::kSingular: return "Singular";
    case ErrorKind::kNoConvergence: return "NoConvergence";
    case ErrorKind::kOverflow: return "Overflow";
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kOutOfRange: return "OutOfRange";
    case ErrorKind::kNotObservable: return "NotObservable";
    case ErrorKind::kNotControllable: return "NotControllable";
    case ErrorKind::kUnsupportedMultiOutput: return "UnsupportedMultiOutput";
    case ErrorKind::kInvalidBounds: return "InvalidBounds";
    case ErrorKind::kNotOnGrid: return "NotOnGrid";
    case ErrorKind::kDiverged: return "Diverged";
    case ErrorKind::kConfigError: return "ConfigError";
    case ErrorKind::kEmptyWindow: return "EmptyWindow";
    case ErrorKind::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace omrc
