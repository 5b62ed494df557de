#pragma once

#include <stdexcept>
#include <string>

namespace magcorner {

// Base of every error raised by the library. The CLI maps subclasses onto
// process exit codes (see exit_code()).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

class InvalidDomain : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class UnsupportedGeometry : public Error {
 public:
  using Error::Error;
};

class ZeroField : public Error {
 public:
  ZeroField() : Error("magnetic field vanishes") {}
  explicit ZeroField(const std::string& what) : Error(what) {}
};

class NoConvergence : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

class NotCaseOne : public Error {
 public:
  using Error::Error;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class MeshFailure : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const noexcept { return line_; }
  int exit_code() const noexcept override { return 2; }

 private:
  int line_;
};

// A parsed document that violates a named invariant.
class ValidationError : public Error {
 public:
  ValidationError(std::string invariant, const std::string& message)
      : Error(invariant + ": " + message), invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }
  int exit_code() const noexcept override { return 2; }

 private:
  std::string invariant_;
};

class CurlMismatch : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

}  // namespace magcorner
