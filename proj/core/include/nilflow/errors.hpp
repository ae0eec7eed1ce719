#pragma once

#include <stdexcept>
#include <string>

namespace nilflow {

// Numeric guards. The CLI maps every NumericError to exit status 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PrecisionExhausted : public NumericError {
 public:
  using NumericError::NumericError;
};

class SmallDivisorError : public NumericError {
 public:
  SmallDivisorError(const std::string& what, long long frequency)
      : NumericError(what + " (frequency " + std::to_string(frequency) + ")"),
        frequency_(frequency) {}
  long long frequency() const noexcept { return frequency_; }

 private:
  long long frequency_;
};

class CapacityError : public NumericError {
 public:
  using NumericError::NumericError;
};

class GridError : public NumericError {
 public:
  using NumericError::NumericError;
};

class TruncationError : public NumericError {
 public:
  TruncationError(const std::string& what, double bound)
      : NumericError(what), bound_(bound) {}
  double bound() const noexcept { return bound_; }

 private:
  double bound_;
};

class RangeError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Violated preconditions on inputs (bad alpha string, nonzero mean for phi...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace nilflow
