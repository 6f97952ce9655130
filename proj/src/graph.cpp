#include "combisb/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>

#include "combisb/errors.hpp"

namespace combisb {

std::vector<std::vector<int>> Digraph::out_edges() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(num_vertices));
  for (int e = 0; e < num_edges(); ++e) out[static_cast<std::size_t>(edges[e].first)].push_back(e);
  return out;
}

std::vector<int> Digraph::topological_order() const {
  std::vector<int> indegree(static_cast<std::size_t>(num_vertices), 0);
  for (const auto& [tail, head] : edges) ++indegree[static_cast<std::size_t>(head)];
  const auto out = out_edges();
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(num_vertices));
  // Smallest ready vertex first, so the order is canonical.
  std::vector<int> ready;
  for (int v = num_vertices - 1; v >= 0; --v)
    if (indegree[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
  while (!ready.empty()) {
    const int v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (int e : out[static_cast<std::size_t>(v)]) {
      const int h = edges[static_cast<std::size_t>(e)].second;
      if (--indegree[static_cast<std::size_t>(h)] == 0) {
        ready.push_back(h);
        std::sort(ready.begin(), ready.end(), std::greater<>());
      }
    }
  }
  if (static_cast<int>(order.size()) != num_vertices)
    throw ContractViolation("directed graph contains a cycle");
  return order;
}

bool Graph::connected() const {
  if (num_vertices <= 1) return true;
  DisjointSets sets(num_vertices);
  int components = num_vertices;
  for (const auto& [a, b] : edges)
    if (sets.unite(a, b)) --components;
  return components == 1;
}

namespace {

std::vector<std::pair<int, int>> read_pairs(std::istream& in, int& num_vertices) {
  std::vector<std::pair<int, int>> edges;
  num_vertices = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    int a = -1, b = -1;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra) || a < 0 || b < 0)
      throw ContractViolation("edge list line " + std::to_string(lineno) +
                              ": expected two nonnegative vertex ids");
    edges.emplace_back(a, b);
    num_vertices = std::max({num_vertices, a + 1, b + 1});
  }
  return edges;
}

}  // namespace

Digraph read_digraph(std::istream& in) {
  Digraph g;
  g.edges = read_pairs(in, g.num_vertices);
  return g;
}

Graph read_graph(std::istream& in) {
  Graph g;
  g.edges = read_pairs(in, g.num_vertices);
  return g;
}

void write_edge_list(std::ostream& out, const std::vector<std::pair<int, int>>& edges) {
  for (const auto& [a, b] : edges) out << a << ' ' << b << '\n';
}

Digraph complete_dag(int n) {
  Digraph g;
  g.num_vertices = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
  return g;
}

Graph complete_graph(int n) {
  Graph g;
  g.num_vertices = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
  return g;
}

BipartiteGraph complete_bipartite(int left, int right) {
  BipartiteGraph g;
  g.num_left = left;
  g.num_right = right;
  for (int i = 0; i < left; ++i)
    for (int j = 0; j < right; ++j) g.edges.emplace_back(i, j);
  return g;
}

DisjointSets::DisjointSets(int n)
    : parent_(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int DisjointSets::find(int v) {
  while (parent_[static_cast<std::size_t>(v)] != v) {
    auto& p = parent_[static_cast<std::size_t>(v)];
    p = parent_[static_cast<std::size_t>(p)];
    v = p;
  }
  return v;
}

bool DisjointSets::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[static_cast<std::size_t>(a)] < rank_[static_cast<std::size_t>(b)]) std::swap(a, b);
  parent_[static_cast<std::size_t>(b)] = a;
  if (rank_[static_cast<std::size_t>(a)] == rank_[static_cast<std::size_t>(b)])
    ++rank_[static_cast<std::size_t>(a)];
  return true;
}

}  // namespace combisb
