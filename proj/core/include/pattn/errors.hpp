#pragma once

#include <stdexcept>
#include <string>

namespace pattn {

/// Invalid or inconsistent configuration (bad JSON, out-of-range fields, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Training produced a non-finite loss or parameter.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative solver failed to reach its tolerance; carries the last gradient norm.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_gradient_norm)
      : std::runtime_error(what), last_gradient_norm(last_gradient_norm) {}
  double last_gradient_norm;
};

/// Atoms of a measure are too spread out for geodesic averaging to be well posed.
class GeodesicBallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constraint set was asked for an operation it does not support
/// (e.g. geodesic ops on a box, projection on a curve).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pattn
