#pragma once

#include <stdexcept>
#include <string>

namespace bullwhip {

/// Base for every error the library reports. Callers that only need a
/// message can catch this; the CLI maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A moving-average window was queried before it held enough observations.
class InsufficientHistory : public Error {
 public:
  using Error::Error;
};

/// The requested closed form is not available for these parameters
/// (e.g. the stochastic lead-time formula with n < M).
class NotSupported : public Error {
 public:
  using Error::Error;
};

/// A series has zero variance or zero mean where a ratio needs it.
class DegenerateSeries : public Error {
 public:
  using Error::Error;
};

/// Autocorrelation requested for a series with no variation.
class ConstantSeries : public Error {
 public:
  using Error::Error;
};

/// The Durbin-Levinson recursion hit a (numerically) singular step.
class SingularRecursion : public Error {
 public:
  using Error::Error;
};

/// Malformed input data (order logs).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Not enough observations for the requested resampling.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment or model configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A simulation config has no closed-form counterpart.
class ModelMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace bullwhip
