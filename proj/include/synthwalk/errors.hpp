#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace synthwalk {

// Invalid input or configuration (bad site index, lattice too small, bad tolerance).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A result could not be computed at the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Probability reached the truncated lattice edge; the finite lattice no longer
// represents the infinite one.
class BoundaryError : public NumericalError {
 public:
  BoundaryError(std::size_t step, double boundary_mass)
      : NumericalError("boundary mass " + std::to_string(boundary_mass) +
                       " exceeds limit at step " + std::to_string(step)),
        step_(step),
        boundary_mass_(boundary_mass) {}

  std::size_t step() const noexcept { return step_; }
  double boundary_mass() const noexcept { return boundary_mass_; }

 private:
  std::size_t step_;
  double boundary_mass_;
};

// Gate constraints Gamma*cos(q + phi) = a cannot be met with the chosen Gamma.
class InfeasibleGate : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace synthwalk
