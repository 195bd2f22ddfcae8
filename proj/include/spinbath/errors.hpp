#pragma once

#include <stdexcept>
#include <string>

namespace spinbath {

// Error taxonomy. Each maps to a process exit code in the CLI:
// config/usage/domain/capacity -> 1, propagation -> 2, io -> 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration values.
struct ConfigError : Error {
  using Error::Error;
};

// API misuse: preconditions violated by the caller.
struct UsageError : Error {
  using Error::Error;
};

// Request outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// Problem size exceeds a stated capacity limit.
struct CapacityError : Error {
  using Error::Error;
};

// Numerical failure during time evolution (norm drift, no convergence).
struct PropagationError : Error {
  using Error::Error;
};

// Filesystem failure while writing or reading run outputs.
struct IoError : Error {
  using Error::Error;
};

}  // namespace spinbath
