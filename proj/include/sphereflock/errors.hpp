#pragma once

#include <stdexcept>
#include <string>

namespace sphereflock {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Transport between (numerically) antipodal points was requested.
class AntipodalError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of an operation, or a non-finite value.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Initial data violates the sphere or tangency constraint.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

/// State drifted off the constraint set beyond repair, or became non-finite.
class BlowupError : public Error {
 public:
  using Error::Error;
};

/// A finite-difference window crosses the antipodal cutoff.
class WindowError : public Error {
 public:
  using Error::Error;
};

/// Malformed run configuration or sweep grid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sphereflock
