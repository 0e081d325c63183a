#pragma once

#include <stdexcept>
#include <string>

namespace gibbs {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A torus object was paired with a shift object (or vice versa).
class PhaseSpaceMismatch : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Integer arithmetic left the int64 range.
class ArithmeticOverflow : public Error {
 public:
  using Error::Error;
};

class InvalidMeasure : public Error {
 public:
  using Error::Error;
};

class EmptyDictionary : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Newton branch following failed or two branches collided: the perturbation
/// is too large for the map to be certified |det A|-to-1.
class CertificationFailure : public Error {
 public:
  using Error::Error;
};

/// Enumeration would exceed the configured leaf/point cap.
class ResourceCapExceeded : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gibbs
