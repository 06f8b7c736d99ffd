#include "skewlab/error.hpp"

namespace skewlab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::TraceNotOne: return "TraceNotOne";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NegativeRadicand: return "NegativeRadicand";
    case ErrorKind::BadAlpha: return "BadAlpha";
    case ErrorKind::BadRank: return "BadRank";
    case ErrorKind::UnknownFixture: return "UnknownFixture";
    case ErrorKind::UnknownId: return "UnknownId";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::MissingAlpha: return "MissingAlpha";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

}  // namespace skewlab
