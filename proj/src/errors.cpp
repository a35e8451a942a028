#include "freeconv/errors.hpp"

namespace freeconv {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonInvertible: return "NonInvertible";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::CriticalPoint: return "CriticalPoint";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::InvalidBlock: return "InvalidBlock";
    case ErrorKind::DegenerateValue: return "DegenerateValue";
    case ErrorKind::UnsupportedRepr: return "UnsupportedRepr";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateMeasure: return "DegenerateMeasure";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::NonCentered: return "NonCentered";
    case ErrorKind::InfiniteVariance: return "InfiniteVariance";
    case ErrorKind::TruncationTooShallow: return "TruncationTooShallow";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace freeconv
