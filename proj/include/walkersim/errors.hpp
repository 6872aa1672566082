#pragma once

#include <stdexcept>
#include <string>

namespace walkersim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or out-of-range configuration. Always names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& msg)
      : Error(field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Non-finite or otherwise unusable numeric input to a simulation step.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Operation applied in a state that cannot accept it.
class StateError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. Carries the 1-based row that failed.
class FormatError : public Error {
 public:
  FormatError(long row, const std::string& msg)
      : Error("row " + std::to_string(row) + ": " + msg), row_(row) {}
  long row() const { return row_; }

 private:
  long row_;
};

// Event stream violates ordering assumptions. Carries the offending index.
class EventSequenceError : public Error {
 public:
  EventSequenceError(long index, const std::string& msg)
      : Error("event " + std::to_string(index) + ": " + msg), index_(index) {}
  long index() const { return index_; }

 private:
  long index_;
};

class SampleSizeError : public Error {
 public:
  using Error::Error;
};

class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace walkersim
