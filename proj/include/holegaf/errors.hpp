#pragma once

#include <stdexcept>
#include <string>

namespace holegaf {

enum class ErrorKind {
  InvalidModel,
  IndexOutOfRange,
  InvalidRadius,
  InvalidPoint,
  InvalidIntensity,
  IntensityOutOfRange,
  NoConvergence,
  NotMonotone,
  SizeCap,
  EmptySubset,
  DomainError,
  ZeroConstantTerm,
  RatioOutOfRange,
  TiltOutOfRange,
  ComputeBudgetExceeded,
  ConfigError,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace holegaf
