#pragma once

#include <stdexcept>
#include <string>

namespace clockfcs {

// Invalid inputs: malformed matrices, out-of-range parameters, unparseable
// or inconsistent configuration. The CLI maps this to exit status 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical procedure failed or produced out-of-contract results
// (SVD non-convergence, imaginary residues, negative noise). Exit status 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The steady-state kernel does not have dimension one.
struct KernelDimensionError : NumericalError {
  using NumericalError::NumericalError;
};

// A steady-state eigenvalue fell below -1e-8.
struct NonPositiveError : NumericalError {
  using NumericalError::NumericalError;
};

// A proven bound was violated numerically in verify mode. Exit status 4.
struct BoundViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace clockfcs
