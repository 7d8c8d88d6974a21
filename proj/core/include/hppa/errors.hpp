#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hppa {

// Precondition failures: backend mismatch, parameter out of range, empty input.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when a candidate resolvent value has f(candidate) = +inf.
class InvalidCandidateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised by certificates that need more iterations than the trace holds.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Constraint, UnknownScenario };

  ConfigError(Kind kind, std::string field, const std::string& message,
              int line = 0, int column = 0)
      : std::runtime_error(message),
        kind_(kind),
        field_(std::move(field)),
        line_(line),
        column_(column) {}

  Kind kind() const { return kind_; }
  const std::string& field() const { return field_; }
  // 1-based; 0 when the error is not tied to a source position.
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  std::string field_;
  int line_;
  int column_;
};

}  // namespace hppa
