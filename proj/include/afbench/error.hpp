#pragma once

#include <stdexcept>
#include <string>

namespace afbench {

// Exit-code mapping in the CLI relies on this hierarchy: every afbench::Error
// other than ConfigError is a computation failure (exit 1).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class StateError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration file or field; reported by the CLI as a usage error.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace afbench
