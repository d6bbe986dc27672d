#pragma once

#include <stdexcept>
#include <string>

namespace imitodyn {

/// Precondition failures on arguments (bad sizes, out-of-range labels, ...).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by every operation that needs a potential when the game has none.
class NoPotential : public std::logic_error {
public:
  NoPotential() : std::logic_error("no potential attached") {}
};

/// The ODE integrator left the simplex by more than the guard can repair.
class SimplexViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace imitodyn
