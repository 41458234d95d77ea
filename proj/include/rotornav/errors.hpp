#pragma once

#include <stdexcept>

namespace rotornav {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameter values, violated preconditions, or bad configuration keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or mismatched data (series length/rate mismatch, bad CSV/file).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Non-finite inputs or simulation state.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Identification could not produce a result (no dominant spectral peak,
// no half-power crossing inside the sweep range).
class IdentificationError : public Error {
 public:
  using Error::Error;
};

// A metric is undefined for the given data (e.g. every sample excluded).
class UndefinedResultError : public Error {
 public:
  using Error::Error;
};

}  // namespace rotornav
