#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "combisb/decision.hpp"
#include "combisb/graph.hpp"

namespace combisb {

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

struct MSet {
  int d = 0;
  int m = 0;
};

// {x : A x <= c}, A is k x d with nonnegative integer entries.
struct Knapsack {
  std::vector<std::vector<int>> A;
  std::vector<int> c;
};

struct PathDag {
  Digraph dag;
  int source = 0;
  int sink = 0;
};

struct SpanningTree {
  Graph graph;
};

struct Matroid {
  using IndependenceTest = std::function<bool(const DecisionVector&)>;
  int ground_size = 0;
  IndependenceTest independent;
  // When set, only maximal independent sets (bases) are decisions.
  bool bases_only = false;
};

struct BipartiteMatching {
  BipartiteGraph graph;
};

// The combinatorial decision set. Immutable after construction.
class DecisionFamily {
 public:
  using Variant = std::variant<MSet, Knapsack, PathDag, SpanningTree, Matroid, BipartiteMatching>;

  static DecisionFamily mset(int d, int m);
  static DecisionFamily knapsack(std::vector<std::vector<int>> A, std::vector<int> c);
  static DecisionFamily path_dag(Digraph dag, int source, int sink);
  static DecisionFamily spanning_tree(Graph graph);
  static DecisionFamily matroid(int ground_size, Matroid::IndependenceTest independent,
                                bool bases_only = false);
  static DecisionFamily bipartite_matching(BipartiteGraph graph);

  // Generic-matroid views of m-sets (uniform matroid) and spanning trees
  // (graphic matroid, bases only), for cross-validation of the matroid code.
  static DecisionFamily uniform_matroid(int d, int m);
  static DecisionFamily graphic_matroid(const Graph& graph, bool bases_only);

  int dim() const { return dim_; }
  const Variant& variant() const { return v_; }
  std::string kind_name() const;

  template <class T>
  const T* as() const { return std::get_if<T>(&v_); }

 private:
  DecisionFamily(Variant v, int dim) : v_(std::move(v)), dim_(dim) {}
  Variant v_;
  int dim_ = 0;
};

bool contains(const DecisionFamily& family, const DecisionVector& x);

// m = max support size over the family.
int max_support(const DecisionFamily& family);

// Exact maximizer of w^T x over the family. Throws Infeasible if the family is empty.
DecisionVector linear_maximize(const DecisionFamily& family, std::span<const double> w);

// Every decision exactly once. Throws SetTooLarge if more than `cap` exist.
std::vector<DecisionVector> enumerate(const DecisionFamily& family,
                                      std::size_t cap = kDefaultEnumerationCap);

// Greedy over a matroid given by its independence test. Elements are scanned by
// decreasing weight (index order among ties); non-positive elements are only
// taken when bases are required.
DecisionVector matroid_greedy(int ground_size, const Matroid::IndependenceTest& independent,
                              std::span<const double> w, bool bases_only);

}  // namespace combisb
