#include "almostdom/error.hpp"

namespace almostdom {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::ZeroMean: return "ZeroMean";
    case ErrorKind::DegenerateCurves: return "DegenerateCurves";
    case ErrorKind::InvalidFamilyDegree: return "InvalidFamilyDegree";
    case ErrorKind::SchemeMismatch: return "SchemeMismatch";
    case ErrorKind::FamilyMismatch: return "FamilyMismatch";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NonFiniteDraw: return "NonFiniteDraw";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NegativeValue: return "NegativeValue";
  }
  return "Unknown";
}

}  // namespace almostdom
