#include "holegaf/errors.hpp"

namespace holegaf {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidRadius: return "InvalidRadius";
    case ErrorKind::InvalidPoint: return "InvalidPoint";
    case ErrorKind::InvalidIntensity: return "InvalidIntensity";
    case ErrorKind::IntensityOutOfRange: return "IntensityOutOfRange";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::SizeCap: return "SizeCap";
    case ErrorKind::EmptySubset: return "EmptySubset";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ZeroConstantTerm: return "ZeroConstantTerm";
    case ErrorKind::RatioOutOfRange: return "RatioOutOfRange";
    case ErrorKind::TiltOutOfRange: return "TiltOutOfRange";
    case ErrorKind::ComputeBudgetExceeded: return "ComputeBudgetExceeded";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace holegaf
