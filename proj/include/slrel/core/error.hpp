#pragma once

#include <stdexcept>
#include <string>

namespace slrel {

// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands live on different domains (cardinality or prior weight differ).
class DomainMismatchError : public Error {
 public:
  using Error::Error;
};

// An operation needs finite evidence but got an opinion with zero uncertainty.
class DogmaticOpinionError : public Error {
 public:
  using Error::Error;
};

// Arguments violate an operator's side condition or a type invariant.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent scenario / estimator configuration.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Input data (streams, reference files, verdicts) that cannot be used.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace slrel
