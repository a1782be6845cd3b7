#include "cilab/error.hpp"

namespace cilab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositivePivot: return "NonPositivePivot";
    case ErrorKind::NegativeDensity: return "NegativeDensity";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotPSDField: return "NotPSDField";
    case ErrorKind::ZeroDivMass: return "ZeroDivMass";
    case ErrorKind::ZeroRowMass: return "ZeroRowMass";
    case ErrorKind::ZeroDirectionalMass: return "ZeroDirectionalMass";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::GridTooLarge: return "GridTooLarge";
    case ErrorKind::SingularOnNode: return "SingularOnNode";
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::NegativeState: return "NegativeState";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::ZeroEnergy: return "ZeroEnergy";
    case ErrorKind::CharacteristicCrossing: return "CharacteristicCrossing";
    case ErrorKind::SupportReachedBoundary: return "SupportReachedBoundary";
    case ErrorKind::NonPhysicalState: return "NonPhysicalState";
    case ErrorKind::BelowResolution: return "BelowResolution";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Format: return "Format";
  }
  return "Unknown";
}

}  // namespace cilab
