#pragma once

#include <stdexcept>
#include <string>

namespace concat {

// Mathematically undefined evaluation: log of a non-positive value, division by exact zero.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised by a single evaluation when the requested precision cannot decide a sign
// (a divisor or log argument straddles zero). Adaptive drivers catch it and retry;
// callers of a fixed-precision eval may treat it as a DomainError.
class InsufficientPrecision : public DomainError {
 public:
  using DomainError::DomainError;
};

// The adaptive precision ladder reached its cap without a certified answer.
class PrecisionExhausted : public std::runtime_error {
 public:
  PrecisionExhausted(const std::string& what, long bits)
      : std::runtime_error(what + " (precision cap " + std::to_string(bits) + " bits)"), bits_(bits) {}
  long bits() const noexcept { return bits_; }

 private:
  long bits_;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace concat
