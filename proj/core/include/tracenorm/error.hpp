#pragma once

#include <stdexcept>
#include <string>

namespace tracenorm {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes, mode indices or sizes that do not fit together.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated files, bad magic bytes, inconsistent manifests.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration values (non-positive penalties, empty grids, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical failures: non-PD systems, SVD non-convergence, Newton breakdown.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace tracenorm
