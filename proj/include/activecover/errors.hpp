#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace activecover {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument, configuration value, or precondition violation.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed input data; carries the 1-based row number when known (0 = file level).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& message) : Error(message) {}
  FormatError(std::size_t row, const std::string& message)
      : Error("row " + std::to_string(row) + ": " + message), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_ = 0;
};

// Requested capability is unavailable (e.g. oracle learner without support flags).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// Query/observe call sequence violated.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Operation invoked in a state that cannot serve it (e.g. after termination).
class StateError : public Error {
 public:
  using Error::Error;
};

// Random sampling failed to produce a value within the attempt budget.
class SamplingError : public Error {
 public:
  using Error::Error;
};

// Not enough data points to perform a statistical operation.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace activecover
