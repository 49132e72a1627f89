#pragma once

#include <stdexcept>
#include <string>

namespace lsw {

/// Failure classes. Each maps to a distinct process exit code in the CLI.
enum class ErrorKind {
  config,     ///< inconsistent or missing configuration
  data,       ///< malformed or out-of-contract input data
  domain,     ///< argument outside the mathematical domain of an operation
  range,      ///< index or lag outside the available history
  io,         ///< file system failures
  numerical,  ///< degenerate recursions, failed factorizations
};

const char* to_string(ErrorKind kind);

/// Exit code used by the CLI for a given failure class.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what) : Error(ErrorKind::range, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

}  // namespace lsw
