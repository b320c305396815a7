#pragma once

#include <stdexcept>

namespace ergo {

// An object was used with a space (or system) it does not belong to.
struct DomainMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// A search or exhaustive check would exceed its configured budget/horizon.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

}  // namespace ergo
