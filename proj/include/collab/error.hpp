#pragma once

#include <stdexcept>
#include <string>

namespace collab {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data failed validation (malformed records, duplicate ids, bad ranges).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A pipeline stage was run before the stage whose artifacts it consumes.
class DependencyError : public Error {
 public:
  using Error::Error;
};

/// A statistic or graph quantity is mathematically undefined for the input.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace collab
