#pragma once

#include <stdexcept>
#include <string>

namespace bdpr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments: dimension mismatches, out-of-range parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed (non-finite data, failed factorization,
/// a projection that found no admissible root).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// File could not be read, written, or parsed into a valid document.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bdpr
