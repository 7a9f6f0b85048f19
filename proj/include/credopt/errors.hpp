#pragma once

#include <stdexcept>

namespace credopt {

// Thrown when an exhaustive-search guard trips ((R+1)^N past the limit).
struct TooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Report-vector enumeration exceeded the configured limit.
struct EnumerationTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A report vector demands more reporters than exist.
struct VectorTooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InfeasibleVector : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidDiscretization : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A frame's hard constraint (credibility floor) cannot be met by any choice.
struct InfeasibleFrame : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pool categories do not line up with the rule table's.
struct CategoryMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvariantViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace credopt
