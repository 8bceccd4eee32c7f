#pragma once

#include <stdexcept>
#include <string>

namespace riskplan {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  size_t position() const { return position_; }

 private:
  size_t position_;
};

class MissingVariable : public Error {
 public:
  using Error::Error;
};

class UndeclaredVariable : public Error {
 public:
  using Error::Error;
};

class InsufficientMomentOrder : public Error {
 public:
  using Error::Error;
};

class DegreeMismatch : public Error {
 public:
  using Error::Error;
};

class MissingTime : public Error {
 public:
  using Error::Error;
};

class SchemaVersionMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace riskplan
