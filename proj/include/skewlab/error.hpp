#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skewlab {

enum class ErrorKind {
  NotSquare,
  NonFinite,
  NotHermitian,
  NotPositive,
  TraceNotOne,
  DimensionMismatch,
  NoConvergence,
  NegativeRadicand,
  BadAlpha,
  BadRank,
  UnknownFixture,
  UnknownId,
  ArityMismatch,
  MissingAlpha,
  ParseError,
  ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure in the library is reported through this type. what() starts
// with the kind name so CLI diagnostics name the violated invariant.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace skewlab
