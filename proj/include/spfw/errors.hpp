#ifndef SPFW_ERRORS_HPP
#define SPFW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spfw {

// Requested operation is not defined for the given domain or objective,
// e.g. vertex enumeration of an l2 ball or the merit value without a
// known saddle point.
struct UnsupportedError : std::runtime_error {
  explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration or grid exceeded its configured cap.
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Internal bookkeeping broke an invariant (active-set drift, weight sums).
struct InvariantViolation : std::logic_error {
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace spfw

#endif  // SPFW_ERRORS_HPP
