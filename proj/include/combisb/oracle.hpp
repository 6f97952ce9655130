#pragma once

#include <optional>
#include <span>

#include "combisb/decision.hpp"
#include "combisb/family.hpp"

namespace combisb {

// Exhaustive reference solvers. Ties go to the support_less-smallest decision.

struct Solution {
  DecisionVector decision;
  double value = 0.0;
};

// max w^T x
Solution brute_p1(const DecisionFamily& family, std::span<const double> w,
                  std::size_t cap = kDefaultEnumerationCap);

// max a^T x + sqrt(b^T x), b >= 0
Solution brute_p2(const DecisionFamily& family, std::span<const double> a,
                  std::span<const double> b, std::size_t cap = kDefaultEnumerationCap);

// max b^T x  s.t.  a^T x >= s
std::optional<Solution> brute_p3(const DecisionFamily& family, std::span<const double> a,
                                 std::span<const double> b, double s,
                                 std::size_t cap = kDefaultEnumerationCap);

}  // namespace combisb
