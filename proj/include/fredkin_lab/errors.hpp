#pragma once

#include <stdexcept>
#include <string>

namespace fredkin_lab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Register/occupation length mismatch or operands over different registers.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Tensoring states whose mode sets overlap, or pairing a port with itself.
class CompositionError : public Error {
 public:
  using Error::Error;
};

/// Out-of-range physical parameter or non-normalized input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Element placed on a port that is not registered.
class PlacementError : public Error {
 public:
  using Error::Error;
};

/// A retained output term still has photons outside the output ports.
class LeakageError : public Error {
 public:
  using Error::Error;
};

/// Malformed circuit or herald configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain where a closed form is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Oracle complexity guard exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace fredkin_lab
