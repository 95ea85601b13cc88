#pragma once

#include <stdexcept>
#include <string>

namespace smallgaps {

// Precondition or argument validation failure.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Query outside the sieved window.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Enumeration budget or memory budget exceeded.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant was found broken at runtime.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace smallgaps
