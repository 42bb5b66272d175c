#pragma once

#include <stdexcept>
#include <string>

namespace aero {

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Controller or observer design is impossible for the given data
/// (non-stabilizable, non-detectable, unobservable, bad weights).
class SynthesisError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to converge, or a matrix was singular.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The plant state became non-finite.
class SimulationFault : public Error {
 public:
  using Error::Error;
};

/// The steady-state target system could not be solved.
class TargetError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class CheckpointError : public Error {
 public:
  using Error::Error;
};

}  // namespace aero
