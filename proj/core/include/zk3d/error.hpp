#pragma once

#include <stdexcept>
#include <string>

namespace zk3d {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGridError : public Error {
 public:
  using Error::Error;
};

/// Field shape does not match its grid, or two operands live on different grids.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class ScenarioError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Raised when a radiation measurement finds nothing behind the peak.
class NoRadiationError : public Error {
 public:
  using Error::Error;
};

class UndefinedDriftError : public Error {
 public:
  using Error::Error;
};

}  // namespace zk3d
