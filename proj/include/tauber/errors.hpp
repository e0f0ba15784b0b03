#pragma once

#include <stdexcept>
#include <string>

namespace tauber {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Root isolation could not certify the sign pattern of a density.
class SignChangeIsolationFailure : public Error {
 public:
  using Error::Error;
};

/// A distribution function left the expression grammar.
class UnrepresentableDensity : public Error {
 public:
  using Error::Error;
};

/// Transform requested where the effective decay on an unbounded segment is not positive.
class DivergentTransform : public Error {
 public:
  using Error::Error;
};

class SignChangeNearZero : public Error {
 public:
  using Error::Error;
};

class SignChangeNearInfinity : public Error {
 public:
  using Error::Error;
};

class ZeroTransform : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::string field, const std::string& what = {})
      : Error(what.empty() ? "invalid value for " + field : field + ": " + what),
        field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace tauber
