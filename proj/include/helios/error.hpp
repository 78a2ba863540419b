#pragma once

#include <stdexcept>
#include <string>

namespace helios {

// Exit-code families shared by the CLI and the HTTP service.
enum class ErrorKind { Input = 2, Domain = 3, Numeric = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::string field = {})
      : std::runtime_error(what), kind_(kind), field_(std::move(field)) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }
  // JSON-path-like location of the offending field, empty when not applicable.
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorKind kind_;
  std::string field_;
};

/// Malformed or inconsistent input (files, documents, arguments).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what, std::string field = {})
      : Error(ErrorKind::Input, what, std::move(field)) {}
};

/// Input is well formed but outside the model's domain (e.g. sun below horizon).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

/// Solver failure or violated numerical consistency.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

}  // namespace helios
