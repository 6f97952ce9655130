#pragma once

// Random instance generators and a subset-scan oracle shared by the test suites.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <random>
#include <vector>

#include "combisb/family.hpp"

namespace combisb::testing {

using TestRng = std::mt19937_64;

inline double uniform(TestRng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(TestRng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::vector<double> random_reals(TestRng& rng, int d, double lo = 0.0, double hi = 1.0) {
  std::vector<double> v(d);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

inline std::vector<int> random_ints(TestRng& rng, int d, int lo, int hi) {
  std::vector<int> v(d);
  for (auto& x : v) x = uniform_int(rng, lo, hi);
  return v;
}

// Every x in {0,1}^d accepted by contains(); independent of enumerate().
inline std::vector<DecisionVector> subset_scan(const DecisionFamily& family) {
  const int d = family.dim();
  std::vector<DecisionVector> out;
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    DecisionVector x(d);
    for (int i = 0; i < d; ++i)
      if (mask & (1u << i)) x.set(i);
    if (contains(family, x)) out.push_back(x);
  }
  return out;
}

inline double max_over(const std::vector<DecisionVector>& xs, const std::vector<double>& w) {
  double best = -1e300;
  for (const auto& x : xs) best = std::max(best, x.dot(w));
  return best;
}

template <class Score>
  requires std::invocable<Score, const DecisionVector&>
double max_over(const std::vector<DecisionVector>& xs, Score score) {
  double best = -1e300;
  for (const auto& x : xs) best = std::max(best, score(x));
  return best;
}

inline DecisionFamily random_knapsack(TestRng& rng, int d, int k, int max_c) {
  std::vector<std::vector<int>> A(k, std::vector<int>(d));
  for (auto& row : A)
    for (auto& v : row) v = uniform_int(rng, 0, 3);
  std::vector<int> c(k);
  for (auto& v : c) v = uniform_int(rng, 1, max_c);
  return DecisionFamily::knapsack(std::move(A), std::move(c));
}

// Connected simple graph: a random spanning tree plus random extra edges.
inline Graph random_connected_graph(TestRng& rng, int n, double extra_p) {
  Graph g;
  g.num_vertices = n;
  std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
  for (int v = 1; v < n; ++v) {
    const int u = uniform_int(rng, 0, v - 1);
    g.edges.emplace_back(u, v);
    has[u][v] = has[v][u] = 1;
  }
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (!has[u][v] && uniform(rng) < extra_p) g.edges.emplace_back(u, v);
  std::shuffle(g.edges.begin(), g.edges.end(), rng);
  return g;
}

inline BipartiteGraph random_bipartite(TestRng& rng, int left, int right, double p) {
  BipartiteGraph g;
  g.num_left = left;
  g.num_right = right;
  while (g.edges.empty()) {
    for (int l = 0; l < left; ++l)
      for (int r = 0; r < right; ++r)
        if (uniform(rng) < p) g.edges.emplace_back(l, r);
  }
  return g;
}

}  // namespace combisb::testing
