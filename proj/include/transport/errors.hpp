#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace transport {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent input (dimension mismatch, bad weights, bad JSON).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An instance exceeds a configured size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Exact integer arithmetic left the representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Weights required to be generic are not; carries one colliding subset pair.
class NonGenericError : public Error {
 public:
  NonGenericError(const std::string& what, std::vector<std::size_t> first,
                  std::vector<std::size_t> second)
      : Error(what), witness_first(std::move(first)), witness_second(std::move(second)) {}

  std::vector<std::size_t> witness_first;
  std::vector<std::size_t> witness_second;
};

/// The transformation split an atom: no exact pushforward assignment exists.
class NonSplittingError : public Error {
 public:
  using Error::Error;
};

/// A measure-map oracle failed (bad output, subprocess death, timeout).
class OracleError : public Error {
 public:
  using Error::Error;
};

}  // namespace transport
