#pragma once

#include <stdexcept>
#include <string>

namespace mctrack {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class EmptySequenceError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Both spectra carry no energy, so no correlation peak exists.
class NoSignalError : public Error {
 public:
  using Error::Error;
};

class InsufficientHistoryError : public Error {
 public:
  using Error::Error;
};

class InsufficientFramesError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class EmptyEvaluationError : public Error {
 public:
  using Error::Error;
};

class MeasurementError : public Error {
 public:
  using Error::Error;
};

class SpecValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace mctrack
