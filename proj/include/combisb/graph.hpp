#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace combisb {

// Edge ids are dense: edge k is edges[k], so an edge set and a decision vector
// over the edges are interchangeable.
struct Digraph {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;  // (tail, head)

  int num_edges() const { return static_cast<int>(edges.size()); }
  // Vertex order with every edge going forward; throws ContractViolation on a cycle.
  std::vector<int> topological_order() const;
  std::vector<std::vector<int>> out_edges() const;
};

struct Graph {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;

  int num_edges() const { return static_cast<int>(edges.size()); }
  bool connected() const;
};

struct BipartiteGraph {
  int num_left = 0;
  int num_right = 0;
  std::vector<std::pair<int, int>> edges;  // (left vertex, right vertex)

  int num_edges() const { return static_cast<int>(edges.size()); }
};

// Edge-list text: one "a b" pair per line, 0-indexed vertices, edge id = line
// number. Blank lines and lines starting with '#' are skipped and do not
// consume an edge id. The vertex count is 1 + the largest index seen.
Digraph read_digraph(std::istream& in);
Graph read_graph(std::istream& in);
void write_edge_list(std::ostream& out, const std::vector<std::pair<int, int>>& edges);

Digraph complete_dag(int n);
Graph complete_graph(int n);
BipartiteGraph complete_bipartite(int left, int right);

// Union-find over a fixed vertex count.
class DisjointSets {
 public:
  explicit DisjointSets(int n);
  int find(int v);
  bool unite(int a, int b);  // false if already joined

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

}  // namespace combisb
