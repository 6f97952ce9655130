#pragma once

#include <stdexcept>
#include <string>

namespace combisb {

// Precondition of an operation was not met by the caller.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The decision set (or a budgeted sub-problem) has no feasible element.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Enumeration would exceed the configured cap.
class SetTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

}  // namespace combisb
