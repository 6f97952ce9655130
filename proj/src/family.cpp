#include "combisb/family.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "combisb/budgeted.hpp"
#include "combisb/errors.hpp"
#include "combisb/hungarian.hpp"

namespace combisb {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Indices sorted by decreasing weight, index order among ties.
std::vector<int> by_decreasing_weight(std::span<const double> w) {
  std::vector<int> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return w[i] > w[j]; });
  return order;
}

bool forms_spanning_tree(const Graph& g, const DecisionVector& x) {
  if (static_cast<int>(x.count()) != g.num_vertices - 1) return false;
  DisjointSets sets(g.num_vertices);
  for (int e : x.support())
    if (!sets.unite(g.edges[e].first, g.edges[e].second)) return false;
  return true;
}

bool is_matching(const BipartiteGraph& g, const DecisionVector& x) {
  std::vector<char> left(g.num_left, 0), right(g.num_right, 0);
  for (int e : x.support()) {
    auto [l, r] = g.edges[e];
    if (left[l] || right[r]) return false;
    left[l] = right[r] = 1;
  }
  return true;
}

bool is_path(const PathDag& p, const DecisionVector& x) {
  const auto& g = p.dag;
  std::vector<int> next_edge(g.num_vertices, -1);
  std::vector<int> indegree(g.num_vertices, 0);
  for (int e : x.support()) {
    auto [tail, head] = g.edges[e];
    if (next_edge[tail] != -1) return false;
    next_edge[tail] = e;
    if (++indegree[head] > 1) return false;
  }
  std::size_t walked = 0;
  int v = p.source;
  while (v != p.sink) {
    const int e = next_edge[v];
    if (e == -1) return false;
    ++walked;
    v = g.edges[e].second;
  }
  return walked == x.count();
}

bool is_basis(const Matroid& mat, const DecisionVector& x) {
  if (!mat.independent(x)) return false;
  DecisionVector y = x;
  for (int e = 0; e < mat.ground_size; ++e) {
    if (x[e]) continue;
    y.set(e);
    const bool extends = mat.independent(y);
    y.set(e, false);
    if (extends) return false;
  }
  return true;
}

class Enumerator {
 public:
  Enumerator(int d, std::size_t cap) : cap_(cap), current_(d) {}

  void emit() {
    if (out_.size() >= cap_)
      throw SetTooLarge("decision set has more than " + std::to_string(cap_) + " elements");
    out_.push_back(current_);
  }
  DecisionVector& current() { return current_; }
  std::vector<DecisionVector> take() { return std::move(out_); }

 private:
  std::size_t cap_;
  DecisionVector current_;
  std::vector<DecisionVector> out_;
};

void enum_mset(Enumerator& en, int i, int d, int left) {
  if (i == d) {
    en.emit();
    return;
  }
  enum_mset(en, i + 1, d, left);
  if (left > 0) {
    en.current().set(i);
    enum_mset(en, i + 1, d, left - 1);
    en.current().set(i, false);
  }
}

void enum_knapsack(Enumerator& en, const Knapsack& k, int i, std::vector<int>& residual) {
  const int d = static_cast<int>(k.A.front().size());
  if (i == d) {
    en.emit();
    return;
  }
  enum_knapsack(en, k, i + 1, residual);
  bool fits = true;
  for (std::size_t r = 0; r < k.A.size(); ++r) fits = fits && k.A[r][i] <= residual[r];
  if (!fits) return;
  for (std::size_t r = 0; r < k.A.size(); ++r) residual[r] -= k.A[r][i];
  en.current().set(i);
  enum_knapsack(en, k, i + 1, residual);
  en.current().set(i, false);
  for (std::size_t r = 0; r < k.A.size(); ++r) residual[r] += k.A[r][i];
}

void enum_paths(Enumerator& en, const PathDag& p, const std::vector<std::vector<int>>& out,
                int v) {
  if (v == p.sink) {
    en.emit();
    return;
  }
  for (int e : out[v]) {
    en.current().set(e);
    enum_paths(en, p, out, p.dag.edges[e].second);
    en.current().set(e, false);
  }
}

// Component labels are copied per level; graphs here are small.
void enum_trees(Enumerator& en, const Graph& g, int e, int chosen, std::vector<int> label) {
  const int need = g.num_vertices - 1;
  if (chosen == need) {
    en.emit();
    return;
  }
  if (e == g.num_edges() || chosen + (g.num_edges() - e) < need) return;
  const auto [a, b] = g.edges[e];
  if (label[a] != label[b]) {
    std::vector<int> merged = label;
    const int from = label[b], to = label[a];
    for (int& l : merged)
      if (l == from) l = to;
    en.current().set(e);
    enum_trees(en, g, e + 1, chosen + 1, std::move(merged));
    en.current().set(e, false);
  }
  enum_trees(en, g, e + 1, chosen, std::move(label));
}

void enum_matchings(Enumerator& en, const BipartiteGraph& g, int e, std::vector<char>& left,
                    std::vector<char>& right) {
  if (e == g.num_edges()) {
    en.emit();
    return;
  }
  enum_matchings(en, g, e + 1, left, right);
  const auto [l, r] = g.edges[e];
  if (left[l] || right[r]) return;
  left[l] = right[r] = 1;
  en.current().set(e);
  enum_matchings(en, g, e + 1, left, right);
  en.current().set(e, false);
  left[l] = right[r] = 0;
}

void enum_matroid(Enumerator& en, const Matroid& mat, int e) {
  if (e == mat.ground_size) {
    if (!mat.bases_only || is_basis(mat, en.current())) en.emit();
    return;
  }
  enum_matroid(en, mat, e + 1);
  en.current().set(e);
  if (mat.independent(en.current())) enum_matroid(en, mat, e + 1);
  en.current().set(e, false);
}

}  // namespace

DecisionFamily DecisionFamily::mset(int d, int m) {
  require(d >= 1 && m >= 1 && m <= d, "m-set requires 1 <= m <= d");
  return DecisionFamily(MSet{d, m}, d);
}

DecisionFamily DecisionFamily::knapsack(std::vector<std::vector<int>> A, std::vector<int> c) {
  require(!A.empty() && A.size() == c.size(), "knapsack requires k >= 1 rows matching c");
  const std::size_t d = A.front().size();
  require(d >= 1, "knapsack requires d >= 1");
  for (const auto& row : A) {
    require(row.size() == d, "knapsack rows must have equal length");
    for (int v : row) require(v >= 0, "knapsack matrix entries must be nonnegative");
  }
  for (int v : c) require(v >= 0, "knapsack capacities must be nonnegative");
  return DecisionFamily(Knapsack{std::move(A), std::move(c)}, static_cast<int>(d));
}

DecisionFamily DecisionFamily::path_dag(Digraph dag, int source, int sink) {
  require(dag.num_edges() >= 1, "path family requires at least one edge");
  require(source >= 0 && source < dag.num_vertices && sink >= 0 && sink < dag.num_vertices &&
              source != sink,
          "invalid source/sink");
  (void)dag.topological_order();
  PathDag p{std::move(dag), source, sink};
  // Reachability of the sink from the source.
  const auto out = p.dag.out_edges();
  std::vector<char> seen(p.dag.num_vertices, 0);
  std::vector<int> stack{source};
  seen[source] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int e : out[v]) {
      const int h = p.dag.edges[e].second;
      if (!seen[h]) {
        seen[h] = 1;
        stack.push_back(h);
      }
    }
  }
  require(seen[sink] != 0, "no source->sink path");
  const int d = p.dag.num_edges();
  return DecisionFamily(std::move(p), d);
}

DecisionFamily DecisionFamily::spanning_tree(Graph graph) {
  require(graph.num_edges() >= 1, "spanning-tree family requires at least one edge");
  for (const auto& [a, b] : graph.edges) require(a != b, "self-loops are not allowed");
  require(graph.connected(), "spanning-tree family requires a connected graph");
  const int d = graph.num_edges();
  return DecisionFamily(SpanningTree{std::move(graph)}, d);
}

DecisionFamily DecisionFamily::matroid(int ground_size, Matroid::IndependenceTest independent,
                                       bool bases_only) {
  require(ground_size >= 1 && static_cast<bool>(independent), "invalid matroid");
  return DecisionFamily(Matroid{ground_size, std::move(independent), bases_only}, ground_size);
}

DecisionFamily DecisionFamily::bipartite_matching(BipartiteGraph graph) {
  require(graph.num_edges() >= 1, "matching family requires at least one edge");
  for (const auto& [l, r] : graph.edges)
    require(l >= 0 && l < graph.num_left && r >= 0 && r < graph.num_right,
            "bipartite edge endpoint out of range");
  const int d = graph.num_edges();
  return DecisionFamily(BipartiteMatching{std::move(graph)}, d);
}

DecisionFamily DecisionFamily::uniform_matroid(int d, int m) {
  require(d >= 1 && m >= 1 && m <= d, "uniform matroid requires 1 <= m <= d");
  return matroid(d, [m](const DecisionVector& x) { return static_cast<int>(x.count()) <= m; });
}

DecisionFamily DecisionFamily::graphic_matroid(const Graph& graph, bool bases_only) {
  return matroid(
      graph.num_edges(),
      [graph](const DecisionVector& x) {
        DisjointSets sets(graph.num_vertices);
        for (int e : x.support())
          if (!sets.unite(graph.edges[e].first, graph.edges[e].second)) return false;
        return true;
      },
      bases_only);
}

std::string DecisionFamily::kind_name() const {
  return std::visit(Overloaded{
                        [](const MSet&) { return std::string("mset"); },
                        [](const Knapsack&) { return std::string("knapsack"); },
                        [](const PathDag&) { return std::string("path_dag"); },
                        [](const SpanningTree&) { return std::string("spanning_tree"); },
                        [](const Matroid&) { return std::string("matroid"); },
                        [](const BipartiteMatching&) { return std::string("bipartite_matching"); },
                    },
                    v_);
}

bool contains(const DecisionFamily& family, const DecisionVector& x) {
  require(static_cast<int>(x.dim()) == family.dim(), "decision dimension mismatch");
  return std::visit(
      Overloaded{
          [&](const MSet& s) { return static_cast<int>(x.count()) <= s.m; },
          [&](const Knapsack& k) {
            for (std::size_t r = 0; r < k.A.size(); ++r) {
              long load = 0;
              for (int i : x.support()) load += k.A[r][i];
              if (load > k.c[r]) return false;
            }
            return true;
          },
          [&](const PathDag& p) { return is_path(p, x); },
          [&](const SpanningTree& t) { return forms_spanning_tree(t.graph, x); },
          [&](const Matroid& mat) { return mat.bases_only ? is_basis(mat, x) : mat.independent(x); },
          [&](const BipartiteMatching& bm) { return is_matching(bm.graph, x); },
      },
      family.variant());
}

int max_support(const DecisionFamily& family) {
  if (const auto* s = family.as<MSet>()) return s->m;
  if (const auto* t = family.as<SpanningTree>()) return t->graph.num_vertices - 1;
  const std::vector<double> ones(family.dim(), 1.0);
  return static_cast<int>(linear_maximize(family, ones).count());
}

DecisionVector matroid_greedy(int ground_size, const Matroid::IndependenceTest& independent,
                              std::span<const double> w, bool bases_only) {
  DecisionVector x(ground_size);
  for (int e : by_decreasing_weight(w)) {
    if (!bases_only && w[e] <= 0.0) break;
    x.set(e);
    if (!independent(x)) x.set(e, false);
  }
  return x;
}

namespace {

DecisionVector max_path(const PathDag& p, std::span<const double> w) {
  const auto& g = p.dag;
  const auto order = g.topological_order();
  const auto out = g.out_edges();
  std::vector<double> best(g.num_vertices, kNegInf);
  std::vector<int> choice(g.num_vertices, -1);
  best[p.sink] = 0.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (v == p.sink) continue;
    for (int e : out[v]) {
      const int h = g.edges[e].second;
      if (best[h] == kNegInf) continue;
      const double cand = w[e] + best[h];
      if (cand > best[v]) {
        best[v] = cand;
        choice[v] = e;
      }
    }
  }
  if (best[p.source] == kNegInf) throw Infeasible("no source->sink path");
  DecisionVector x(g.num_edges());
  for (int v = p.source; v != p.sink; v = g.edges[choice[v]].second) x.set(choice[v]);
  return x;
}

DecisionVector max_spanning_tree(const Graph& g, std::span<const double> w) {
  DecisionVector x(g.num_edges());
  DisjointSets sets(g.num_vertices);
  int taken = 0;
  for (int e : by_decreasing_weight(w)) {
    if (sets.unite(g.edges[e].first, g.edges[e].second)) {
      x.set(e);
      if (++taken == g.num_vertices - 1) break;
    }
  }
  if (taken != g.num_vertices - 1) throw Infeasible("graph has no spanning tree");
  return x;
}

DecisionVector max_matching(const BipartiteGraph& g, std::span<const double> w) {
  // Best positive edge per vertex pair; parallel edges resolve to the lowest id.
  std::vector<std::vector<int>> pick(g.num_left, std::vector<int>(g.num_right, -1));
  std::vector<std::vector<double>> profit(g.num_left, std::vector<double>(g.num_right, 0.0));
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto [l, r] = g.edges[e];
    if (w[e] > 0.0 && (pick[l][r] == -1 || w[e] > w[pick[l][r]])) {
      pick[l][r] = e;
      profit[l][r] = w[e];
    }
  }
  DecisionVector x(g.num_edges());
  const auto assignment = max_weight_assignment(profit);
  for (int l = 0; l < g.num_left; ++l) {
    const int r = assignment[l];
    if (r >= 0 && pick[l][r] != -1) x.set(pick[l][r]);
  }
  return x;
}

}  // namespace

DecisionVector linear_maximize(const DecisionFamily& family, std::span<const double> w) {
  require(static_cast<int>(w.size()) == family.dim(), "weight dimension mismatch");
  return std::visit(
      Overloaded{
          [&](const MSet& s) {
            DecisionVector x(s.d);
            int taken = 0;
            for (int i : by_decreasing_weight(w)) {
              if (taken == s.m || w[i] <= 0.0) break;
              x.set(i);
              ++taken;
            }
            return x;
          },
          [&](const Knapsack& k) {
            const std::vector<int> ones(family.dim(), 1);
            return budgeted_knapsack_all(k.A, k.c, ones, w, 0).decision(0);
          },
          [&](const PathDag& p) { return max_path(p, w); },
          [&](const SpanningTree& t) { return max_spanning_tree(t.graph, w); },
          [&](const Matroid& mat) {
            return matroid_greedy(mat.ground_size, mat.independent, w, mat.bases_only);
          },
          [&](const BipartiteMatching& bm) { return max_matching(bm.graph, w); },
      },
      family.variant());
}

std::vector<DecisionVector> enumerate(const DecisionFamily& family, std::size_t cap) {
  Enumerator en(family.dim(), cap);
  std::visit(Overloaded{
                 [&](const MSet& s) { enum_mset(en, 0, s.d, s.m); },
                 [&](const Knapsack& k) {
                   std::vector<int> residual = k.c;
                   enum_knapsack(en, k, 0, residual);
                 },
                 [&](const PathDag& p) { enum_paths(en, p, p.dag.out_edges(), p.source); },
                 [&](const SpanningTree& t) {
                   std::vector<int> label(t.graph.num_vertices);
                   std::iota(label.begin(), label.end(), 0);
                   enum_trees(en, t.graph, 0, 0, std::move(label));
                 },
                 [&](const Matroid& mat) { enum_matroid(en, mat, 0); },
                 [&](const BipartiteMatching& bm) {
                   std::vector<char> left(bm.graph.num_left, 0), right(bm.graph.num_right, 0);
                   enum_matchings(en, bm.graph, 0, left, right);
                 },
             },
             family.variant());
  return en.take();
}

}  // namespace combisb
