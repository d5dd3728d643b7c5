#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aia {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A construct outside the STRIPS subset (quantifiers, fluents, constants, ...).
class UnsupportedFeature : public Error {
 public:
  explicit UnsupportedFeature(const std::string& construct)
      : Error("unsupported feature: " + construct), construct_(construct) {}

  const std::string& construct() const { return construct_; }

 private:
  std::string construct_;
};

class VocabularyMismatch : public Error {
 public:
  using Error::Error;
};

/// Raised when a model would hold two modes for one pal tuple.
class VariantConflict : public Error {
 public:
  using Error::Error;
};

class MalformedQuery : public Error {
 public:
  using Error::Error;
};

/// The state pool holds no state that lets the repair step make progress.
class RepairFailure : public Error {
 public:
  using Error::Error;
};

/// Grounding or search exceeded a configured cap.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// The agent answered in a way no deterministic STRIPS model can.
class AgentInconsistency : public Error {
 public:
  using Error::Error;
};

}  // namespace aia
