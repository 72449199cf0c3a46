#pragma once

#include <stdexcept>
#include <string>

namespace rtdiff {

// Base of every error thrown by the library. The CLI maps these to exit
// code 1 (numerical failure); ConfigError is handled separately.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Observable evaluated to a non-finite or negative value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Window / support mismatch between sequences or combs.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Negative iteration count on a non-invertible map, point outside [0,1).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Precondition on arguments violated (gcd, ranges, empty inputs).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Empirical estimator asked for a window too large for its horizon.
class WindowError : public Error {
 public:
  using Error::Error;
};

// Power iteration on the transfer operator failed to converge.
class SpectralError : public Error {
 public:
  using Error::Error;
};

// Branch derivative vanishes somewhere in a branch interior.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// Truncated Fourier series produced a clearly negative density.
class TruncationError : public Error {
 public:
  using Error::Error;
};

// Malformed input file or configuration. Carries the offending field path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message);

  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace rtdiff
