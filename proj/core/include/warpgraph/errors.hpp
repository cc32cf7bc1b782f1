#pragma once

#include <stdexcept>
#include <string>

namespace warpgraph {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An argument left the open interval a function is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A stated hypothesis of a formula or theorem does not hold on the input.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Singular metric, indefinite matrix, failed factorization and friends.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed file or unreadable path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace warpgraph
