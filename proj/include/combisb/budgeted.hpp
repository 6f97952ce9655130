#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "combisb/decision.hpp"
#include "combisb/family.hpp"

namespace combisb {

struct BudgetEntry {
  DecisionVector decision;
  double value = 0.0;
};

// Solutions of  max b^T x  s.t.  x in X, a^T x >= s  for s = 0..s_max.
// Values are stored eagerly; decisions may be reconstructed on demand.
class BudgetTable {
 public:
  using Reconstruct = std::function<DecisionVector(int s)>;

  BudgetTable() = default;
  BudgetTable(std::vector<double> values, Reconstruct reconstruct);
  static BudgetTable from_entries(std::vector<std::optional<BudgetEntry>> entries);

  int s_max() const { return static_cast<int>(values_.size()) - 1; }
  bool feasible(int s) const;
  // -infinity when infeasible.
  double value(int s) const { return values_.at(static_cast<std::size_t>(s)); }
  // Throws Infeasible for an infeasible budget.
  DecisionVector decision(int s) const;
  std::optional<BudgetEntry> entry(int s) const;

 private:
  std::vector<double> values_;
  Reconstruct reconstruct_;
};

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Exact, all budgets at once. Knapsack set {x : A x <= c}; a_i >= 1.
BudgetTable budgeted_knapsack_all(const std::vector<std::vector<int>>& A,
                                  std::span<const int> c, std::span<const int> a,
                                  std::span<const double> b, int s_max);

// Exact, all budgets at once, over source->sink paths of a DAG; a_e >= 1.
BudgetTable budgeted_path_all(const Digraph& dag, int source, int sink,
                              std::span<const int> a, std::span<const double> b, int s_max);

// Exact all-budget solver for MSet, Knapsack and PathDag families.
BudgetTable budgeted_exact_all(const DecisionFamily& family, std::span<const int> a,
                               std::span<const double> b, int s_max);

using LinearOracle = std::function<DecisionVector(std::span<const double>)>;

struct LagrangianCandidates {
  double lambda = 0.0;
  DecisionVector plus;   // a^T plus >= s
  DecisionVector minus;  // a^T minus <= s
};

// Minimizes M(lambda) = max_x { b^T x + lambda (a^T x - s) } over lambda >= 0 and
// returns two maximizers at the minimizer, one on each side of the budget.
// Throws Infeasible when no decision reaches a^T x >= s.
LagrangianCandidates lagrangian_candidates(const LinearOracle& maximize, std::span<const int> a,
                                           std::span<const double> b, int s);
LagrangianCandidates lagrangian_candidates(const DecisionFamily& family, std::span<const int> a,
                                           std::span<const double> b, int s);

using IndependenceTest = std::function<bool(const DecisionVector&)>;

// Exchange-swap refinement of a Lagrangian candidate pair on a matroid.
DecisionVector refine_matroid(const IndependenceTest& independent, DecisionVector plus,
                              DecisionVector minus, std::span<const int> a,
                              std::span<const double> b, double lambda, int s);
// `family` must be SpanningTree or Matroid.
DecisionVector refine_matroid(const DecisionFamily& family, DecisionVector plus,
                              DecisionVector minus, std::span<const int> a,
                              std::span<const double> b, double lambda, int s);

// Alternating path / cycle transfer refinement on bipartite matchings.
DecisionVector refine_matching(const BipartiteGraph& graph, DecisionVector plus,
                               DecisionVector minus, std::span<const int> a,
                               std::span<const double> b, double lambda, int s);

// 1/2-approximation for SpanningTree, Matroid and BipartiteMatching families.
// nullopt when no decision satisfies a^T x >= s.
std::optional<DecisionVector> budgeted_halfapprox(const DecisionFamily& family,
                                                  std::span<const int> a,
                                                  std::span<const double> b, int s);

// budgeted_halfapprox for every s in 0..s_max, sharing per-pin work.
BudgetTable budgeted_halfapprox_all(const DecisionFamily& family, std::span<const int> a,
                                    std::span<const double> b, int s_max);

// Approximation ratio of the budgeted solver used for this family: 1 when an
// exact dynamic program exists, 1/2 otherwise.
double budgeted_ratio(const DecisionFamily& family);

}  // namespace combisb
