#pragma once

#include <stdexcept>
#include <string>

namespace litho {

// Base for every failure raised by the core. The C API maps each subclass to
// a distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or mismatched inputs (grid/spacing mismatch).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A kernel does not fit in the padded domain it is applied on.
class TruncationError : public Error {
 public:
  using Error::Error;
};

// A request would exceed the configured resource limits (dense Hopkins path).
class ResourceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// The smoothed-PSF search exhausted its parameter budget.
class ConstructionFailed : public Error {
 public:
  ConstructionFailed(const std::string& what, double best_deviation)
      : Error(what), best_deviation_(best_deviation) {}
  double best_deviation() const noexcept { return best_deviation_; }

 private:
  double best_deviation_;
};

}  // namespace litho
