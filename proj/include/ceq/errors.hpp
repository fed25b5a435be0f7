#pragma once

#include <stdexcept>
#include <string>

namespace ceq {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Level coincides with a critical value f(E); measures are only defined a.e.
struct CriticalLevel : Error {
  using Error::Error;
};

// Requested [x, y] is not contained in a single monotone run.
struct NotMonotoneRun : Error {
  using Error::Error;
};

// Preimage count exceeds the bound promised to the monotone-interval search.
struct HypothesisViolated : Error {
  using Error::Error;
};

struct QuadratureTolNotMet : Error {
  using Error::Error;
};

// Test function does not vanish at the final time.
struct SupportViolation : Error {
  using Error::Error;
};

struct DomainViolation : Error {
  using Error::Error;
};

// Monotone bracketing failed to enclose the requested value.
struct BracketFailure : Error {
  using Error::Error;
};

}  // namespace ceq
