#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "combisb/budgeted.hpp"
#include "combisb/policies.hpp"

namespace combisb {

// Solvers under test. Defaults are the library implementations; tests swap in
// broken ones to check that the suites notice.
struct Solvers {
  std::function<DecisionVector(const DecisionFamily&, std::span<const double>)> linear =
      [](const DecisionFamily& f, std::span<const double> w) { return linear_maximize(f, w); };
  std::function<BudgetTable(const std::vector<std::vector<int>>&, const std::vector<int>&,
                            std::span<const int>, std::span<const double>, int)>
      knapsack_all = budgeted_knapsack_all;
  std::function<BudgetTable(const Digraph&, int, int, std::span<const int>,
                            std::span<const double>, int)>
      path_all = budgeted_path_all;
  std::function<std::optional<DecisionVector>(const DecisionFamily&, std::span<const int>,
                                              std::span<const double>, int)>
      halfapprox = budgeted_halfapprox;
  std::function<DecisionVector(const DecisionFamily&, const Statistics&, const PolicyConfig&)>
      aescb = select_aescb;
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  long checks = 0;
  std::string first_failure;
  double seconds = 0.0;
};

const std::vector<std::string>& selftest_suites();
SuiteResult run_suite(const std::string& name, const Solvers& solvers = {});

}  // namespace combisb
