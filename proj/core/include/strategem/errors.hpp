#pragma once

#include <stdexcept>

namespace strategem {

// A learner or adversary observed data that no member of its class can explain.
class RealizabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A callback or component broke an interface contract (e.g. a tie-break policy
// returned a node outside the candidate set).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant that should be impossible under the documented
// preconditions.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace strategem
