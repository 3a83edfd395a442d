#pragma once

#include <stdexcept>
#include <string>

namespace rgkit {

// Malformed input: bad graph files, out-of-range labels, broken preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A size guard refused the request before any work was done.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal consistency check failed (e.g. a non-integral symmetry factor).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rgkit
