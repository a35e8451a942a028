#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace freeconv {

enum class ErrorKind {
  NonInvertible,
  DomainError,
  CriticalPoint,
  SizeLimit,
  InvalidBlock,
  DegenerateValue,
  UnsupportedRepr,
  NoConvergence,
  DegenerateMeasure,
  InvalidSpec,
  NonCentered,
  InfiniteVariance,
  TruncationTooShallow,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace freeconv
