#pragma once

#include <stdexcept>
#include <string>

namespace jetpot {

// Precondition violations on operation inputs.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Requested a closed form the variant does not carry (e.g. a polar formula).
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Domain too large for a finite-R cone: no strict approximator exists.
struct InfeasibleDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sampling budget exhausted without finding the required point.
struct SearchFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Boundary-ray bracketing failed: the set is not monotone for the given
// cone direction, so the ray solver's single-crossing guarantee is void.
struct StructureViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Constrained operator evaluated outside its constraint set.
struct ConstraintViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Root extraction found complex roots beyond tolerance: the input is
// outside the oracle's hyperbolic class.
struct HyperbolicityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Level outside the pair's admissible interval.
struct LevelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Hyperplane/normal geometry unusable (non-transversal, bad relative interior).
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grid too coarse to localize the feature a scenario must exhibit.
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Function oracle produced non-finite samples.
struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace jetpot
