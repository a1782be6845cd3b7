#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cilab {

enum class ErrorKind {
  NonPositivePivot,
  NegativeDensity,
  DimensionMismatch,
  NotPSD,
  NotPSDField,
  ZeroDivMass,
  ZeroRowMass,
  ZeroDirectionalMass,
  GridMismatch,
  GridTooLarge,
  SingularOnNode,
  DegenerateDirection,
  NegativeState,
  NotAdmissible,
  ZeroEnergy,
  CharacteristicCrossing,
  SupportReachedBoundary,
  NonPhysicalState,
  BelowResolution,
  InvalidArgument,
  Format,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `kind()` is stable and is what the
/// tests and the CLI dispatch on; `what()` carries the human-readable detail
/// (offending index, cell, step...).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cilab
