#pragma once

#include <stdexcept>
#include <string>

namespace kspave {

// Base class of all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input or violated operation hypothesis (wrong dimensions,
// not a projection, diagonal out of range, ...).
struct InvalidInput : Error {
  using Error::Error;
};

// A matrix required to be positive semidefinite has an eigenvalue below
// the clamping tolerance.
struct NotPsd : InvalidInput {
  using InvalidInput::InvalidInput;
};

// The requested computation exceeds a configured work or size budget.
// The message carries the size that would have been required.
struct BudgetExceeded : Error {
  using Error::Error;
};

// Linear solve hit a singular pencil at the evaluation point.
struct SingularPoint : Error {
  using Error::Error;
};

// A Gram matrix is too ill-conditioned to invert reliably.
struct IllConditioned : Error {
  using Error::Error;
};

// A quantity that is guaranteed by theory came out wrong numerically.
// Seeing this exception means a bug, not a property of the input.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace kspave
