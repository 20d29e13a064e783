#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace chilqr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Integration produced a non-finite state.
class IntegrationDivergedError : public Error {
 public:
  using Error::Error;
};

// Event bracketing/bisection failures.
class BracketError : public Error {
 public:
  using Error::Error;
};
class ToleranceError : public Error {
 public:
  using Error::Error;
};

// More than max_events_per_step hybrid events inside a single knot step.
class ZenoError : public Error {
 public:
  using Error::Error;
};

// State left the configured bounding box.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Near-tangential guard crossing; the saltation linearization is invalid.
class GrazingSingularityError : public Error {
 public:
  using Error::Error;
};

// A finite-difference perturbation changed the step's event count.
class ModeSequenceFragilityError : public Error {
 public:
  using Error::Error;
};

// Backward pass could not be regularized into a solvable problem.
class BackwardPassError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace chilqr
