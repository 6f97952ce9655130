#include "combisb/budgeted.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "combisb/errors.hpp"
#include "combisb/hungarian.hpp"

namespace combisb {

BudgetTable::BudgetTable(std::vector<double> values, Reconstruct reconstruct)
    : values_(std::move(values)), reconstruct_(std::move(reconstruct)) {}

BudgetTable BudgetTable::from_entries(std::vector<std::optional<BudgetEntry>> entries) {
  std::vector<double> values(entries.size(), kNegInf);
  for (std::size_t s = 0; s < entries.size(); ++s)
    if (entries[s]) values[s] = entries[s]->value;
  auto shared = std::make_shared<std::vector<std::optional<BudgetEntry>>>(std::move(entries));
  return BudgetTable(std::move(values), [shared](int s) { return (*shared)[s]->decision; });
}

bool BudgetTable::feasible(int s) const { return s >= 0 && s <= s_max() && values_[s] != kNegInf; }

DecisionVector BudgetTable::decision(int s) const {
  if (!feasible(s)) throw Infeasible("budget " + std::to_string(s) + " is not achievable");
  return reconstruct_(s);
}

std::optional<BudgetEntry> BudgetTable::entry(int s) const {
  if (!feasible(s)) return std::nullopt;
  return BudgetEntry{reconstruct_(s), values_[s]};
}

namespace {

void check_budget_inputs(std::span<const int> a, std::span<const double> b, std::size_t d,
                         int s_max) {
  require(a.size() == d && b.size() == d, "budget vectors must have length d");
  require(s_max >= 0, "s_max must be nonnegative");
  for (int v : a) require(v >= 1, "budget weights a must be positive integers");
}

// Dynamic program over items i = d-1..0 with state (residual capacity, budget).
// The budget is clamped at 0 below and s_max above. take[i][state][s] records
// whether item i is taken in the optimum of the suffix problem.
struct KnapsackDp {
  int d = 0;
  int k = 0;
  int S = 0;
  int num_states = 0;
  std::vector<int> stride;
  std::vector<int> full_state_digits;
  std::vector<int> item_offset;    // state index decrement when taking item i
  std::vector<std::uint8_t> fits;  // [i * num_states + state]
  std::vector<std::uint8_t> take;  // [(i * num_states + state) * (S+1) + s]
  std::vector<int> a;
  int full_state = 0;
};

}  // namespace

BudgetTable budgeted_knapsack_all(const std::vector<std::vector<int>>& A, std::span<const int> c,
                                  std::span<const int> a, std::span<const double> b, int s_max) {
  require(!A.empty() && A.size() == c.size(), "knapsack requires k >= 1 rows matching c");
  const int d = static_cast<int>(A.front().size());
  check_budget_inputs(a, b, static_cast<std::size_t>(d), s_max);
  for (const auto& row : A) {
    require(static_cast<int>(row.size()) == d, "knapsack rows must have equal length");
    for (int v : row) require(v >= 0, "knapsack matrix entries must be nonnegative integers");
  }
  for (int v : c) require(v >= 0, "knapsack capacities must be nonnegative integers");

  auto dp = std::make_shared<KnapsackDp>();
  dp->d = d;
  dp->k = static_cast<int>(c.size());
  dp->S = s_max;
  dp->a.assign(a.begin(), a.end());
  dp->stride.resize(dp->k);
  long states = 1;
  for (int r = 0; r < dp->k; ++r) {
    dp->stride[r] = static_cast<int>(states);
    states *= c[r] + 1;
    require(states <= 50'000'000, "knapsack capacity product too large");
  }
  dp->num_states = static_cast<int>(states);
  dp->full_state = 0;
  for (int r = 0; r < dp->k; ++r) dp->full_state += c[r] * dp->stride[r];

  const int ns = dp->num_states;
  const int width = s_max + 1;
  dp->item_offset.assign(d, 0);
  dp->fits.assign(static_cast<std::size_t>(d) * ns, 0);
  for (int i = 0; i < d; ++i) {
    for (int r = 0; r < dp->k; ++r) dp->item_offset[i] += A[r][i] * dp->stride[r];
    for (int state = 0; state < ns; ++state) {
      bool ok = true;
      int rest = state;
      for (int r = dp->k - 1; r >= 0; --r) {
        const int digit = rest / dp->stride[r];
        rest %= dp->stride[r];
        ok = ok && digit >= A[r][i];
      }
      dp->fits[static_cast<std::size_t>(i) * ns + state] = ok ? 1 : 0;
    }
  }
  dp->take.assign(static_cast<std::size_t>(d) * ns * width, 0);

  std::vector<double> next(static_cast<std::size_t>(ns) * width, kNegInf);
  for (int state = 0; state < ns; ++state) next[static_cast<std::size_t>(state) * width] = 0.0;
  std::vector<double> cur(next.size());
  for (int i = d - 1; i >= 0; --i) {
    const int ai = a[i];
    const double bi = b[i];
    for (int state = 0; state < ns; ++state) {
      const double* skip = &next[static_cast<std::size_t>(state) * width];
      double* out = &cur[static_cast<std::size_t>(state) * width];
      std::uint8_t* took = &dp->take[(static_cast<std::size_t>(i) * ns + state) * width];
      std::copy(skip, skip + width, out);
      if (!dp->fits[static_cast<std::size_t>(i) * ns + state]) continue;
      const double* after = &next[static_cast<std::size_t>(state - dp->item_offset[i]) * width];
      for (int s = 0; s < width; ++s) {
        const double rest = after[s > ai ? s - ai : 0];
        if (rest == kNegInf) continue;
        const double with = bi + rest;
        if (with > out[s]) {
          out[s] = with;
          took[s] = 1;
        }
      }
    }
    std::swap(cur, next);
  }
  std::vector<double> values(next.begin() + static_cast<std::ptrdiff_t>(dp->full_state) * width,
                             next.begin() + static_cast<std::ptrdiff_t>(dp->full_state + 1) * width);
  return BudgetTable(std::move(values), [dp](int s) {
    const int width = dp->S + 1;
    DecisionVector x(dp->d);
    int state = dp->full_state;
    for (int i = 0; i < dp->d; ++i) {
      if (dp->take[(static_cast<std::size_t>(i) * dp->num_states + state) * width + s]) {
        x.set(i);
        state -= dp->item_offset[i];
        s = std::max(s - dp->a[i], 0);
      }
    }
    return x;
  });
}

BudgetTable budgeted_path_all(const Digraph& dag, int source, int sink, std::span<const int> a,
                              std::span<const double> b, int s_max) {
  check_budget_inputs(a, b, static_cast<std::size_t>(dag.num_edges()), s_max);
  require(source >= 0 && source < dag.num_vertices && sink >= 0 && sink < dag.num_vertices,
          "source/sink out of range");
  const int nv = dag.num_vertices;
  const int width = s_max + 1;
  const auto order = dag.topological_order();
  const auto out = dag.out_edges();

  // value[v * width + s]: best b over v->sink paths with a-weight >= s.
  auto value = std::make_shared<std::vector<double>>(static_cast<std::size_t>(nv) * width, kNegInf);
  auto choice = std::make_shared<std::vector<int>>(static_cast<std::size_t>(nv) * width, -1);
  auto& V = *value;
  auto& W = *choice;
  V[static_cast<std::size_t>(sink) * width] = 0.0;
  // Budget 0: longest path in reverse topological order.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (v == sink) continue;
    for (int e : out[v]) {
      const double rest = V[static_cast<std::size_t>(dag.edges[e].second) * width];
      if (rest == kNegInf) continue;
      if (b[e] + rest > V[static_cast<std::size_t>(v) * width]) {
        V[static_cast<std::size_t>(v) * width] = b[e] + rest;
        W[static_cast<std::size_t>(v) * width] = e;
      }
    }
  }
  // Positive budgets only refer to strictly smaller budgets since a_e >= 1.
  for (int s = 1; s <= s_max; ++s) {
    for (int v = 0; v < nv; ++v) {
      if (v == sink) continue;
      double best = kNegInf;
      int arg = -1;
      for (int e : out[v]) {
        const int h = dag.edges[e].second;
        const double rest = V[static_cast<std::size_t>(h) * width + std::max(s - a[e], 0)];
        if (rest == kNegInf) continue;
        if (b[e] + rest > best) {
          best = b[e] + rest;
          arg = e;
        }
      }
      V[static_cast<std::size_t>(v) * width + s] = best;
      W[static_cast<std::size_t>(v) * width + s] = arg;
    }
  }
  std::vector<double> values(V.begin() + static_cast<std::ptrdiff_t>(source) * width,
                             V.begin() + static_cast<std::ptrdiff_t>(source + 1) * width);
  std::vector<int> weights(a.begin(), a.end());
  const int ne = dag.num_edges();
  auto heads = std::make_shared<std::vector<int>>(ne);
  for (int e = 0; e < ne; ++e) (*heads)[e] = dag.edges[e].second;
  return BudgetTable(std::move(values), [choice, heads, weights, width, ne, source, sink](int s) {
    DecisionVector x(ne);
    for (int v = source; v != sink;) {
      const int e = (*choice)[static_cast<std::size_t>(v) * width + s];
      x.set(e);
      s = std::max(s - weights[e], 0);
      v = (*heads)[e];
    }
    return x;
  });
}

BudgetTable budgeted_exact_all(const DecisionFamily& family, std::span<const int> a,
                               std::span<const double> b, int s_max) {
  if (const auto* ms = family.as<MSet>()) {
    const std::vector<std::vector<int>> A{std::vector<int>(ms->d, 1)};
    const std::vector<int> c{ms->m};
    return budgeted_knapsack_all(A, c, a, b, s_max);
  }
  if (const auto* k = family.as<Knapsack>()) return budgeted_knapsack_all(k->A, k->c, a, b, s_max);
  if (const auto* p = family.as<PathDag>())
    return budgeted_path_all(p->dag, p->source, p->sink, a, b, s_max);
  throw ContractViolation("no exact budgeted solver for family " + family.kind_name());
}

double budgeted_ratio(const DecisionFamily& family) {
  if (family.as<MSet>() || family.as<Knapsack>() || family.as<PathDag>()) return 1.0;
  return 0.5;
}

// ---------------------------------------------------------------------------
// Lagrangian relaxation

namespace {

long a_weight(const DecisionVector& x, std::span<const int> a) {
  long total = 0;
  for (int i : x.support()) total += a[i];
  return total;
}

// Cutting-plane minimization of the convex piecewise-linear M(lambda), started
// from a maximizer `lo` of the relaxation at lambda = 0 (a^T lo < s) and any
// decision `hi` with a^T hi >= s. Each new line has an integer slope
// a^T x - s, so the loop visits finitely many lines.
LagrangianCandidates cutting_plane(const LinearOracle& maximize, std::span<const int> a,
                                   std::span<const double> b, int s, DecisionVector lo,
                                   DecisionVector hi) {
  const std::size_t d = a.size();
  std::vector<double> w(d);
  for (int iter = 0; iter < 100000; ++iter) {
    const double b_lo = lo.dot(b), b_hi = hi.dot(b);
    const long a_lo = a_weight(lo, a), a_hi = a_weight(hi, a);
    const double lambda = std::max(0.0, (b_lo - b_hi) / static_cast<double>(a_hi - a_lo));
    for (std::size_t i = 0; i < d; ++i) w[i] = b[i] + lambda * a[i];
    DecisionVector x = maximize(w);
    const double line = b_hi + lambda * static_cast<double>(a_hi - s);
    const double val = x.dot(b) + lambda * static_cast<double>(a_weight(x, a) - s);
    const double tol = 1e-12 * std::max(1.0, std::abs(line));
    if (val <= line + tol || x == lo || x == hi) return {lambda, std::move(hi), std::move(lo)};
    if (a_weight(x, a) >= s)
      hi = std::move(x);
    else
      lo = std::move(x);
  }
  throw std::logic_error("Lagrangian search did not converge");
}

std::vector<double> as_double(std::span<const int> a) { return {a.begin(), a.end()}; }

}  // namespace

LagrangianCandidates lagrangian_candidates(const LinearOracle& maximize, std::span<const int> a,
                                           std::span<const double> b, int s) {
  require(a.size() == b.size(), "a and b must have equal length");
  DecisionVector lo = maximize(b);
  if (a_weight(lo, a) >= s) return {0.0, lo, lo};
  const auto ad = as_double(a);
  DecisionVector hi = maximize(ad);
  if (a_weight(hi, a) < s) throw Infeasible("budget " + std::to_string(s) + " is not achievable");
  return cutting_plane(maximize, a, b, s, std::move(lo), std::move(hi));
}

LagrangianCandidates lagrangian_candidates(const DecisionFamily& family, std::span<const int> a,
                                           std::span<const double> b, int s) {
  require(static_cast<int>(a.size()) == family.dim(), "a must have length d");
  return lagrangian_candidates(
      [&family](std::span<const double> w) { return linear_maximize(family, w); }, a, b, s);
}

// ---------------------------------------------------------------------------
// Refinement

DecisionVector refine_matroid(const IndependenceTest& independent, DecisionVector plus,
                              DecisionVector minus, std::span<const int> a,
                              std::span<const double> b, double lambda, int s) {
  (void)b;
  (void)lambda;
  if (a_weight(minus, a) >= s) return minus;
  // Zero-weight elements can leave the candidates with different sizes;
  // augment the smaller one from the larger.
  auto augment = [&](DecisionVector& small, const DecisionVector& large) {
    while (small.count() < large.count()) {
      bool grown = false;
      for (int e : large.support()) {
        if (small[e]) continue;
        small.set(e);
        if (independent(small)) {
          grown = true;
          break;
        }
        small.set(e, false);
      }
      if (!grown) break;
    }
  };
  augment(minus, plus);
  augment(plus, minus);
  if (a_weight(minus, a) >= s) return minus;

  while (true) {
    const DecisionVector diff = plus ^ minus;
    std::vector<int> only_plus, only_minus;
    for (int e : diff.support()) (plus[e] ? only_plus : only_minus).push_back(e);
    if (only_plus.size() <= 1) break;
    bool swapped = false;
    for (int e : only_plus) {
      for (int f : only_minus) {
        DecisionVector y = plus;
        y.set(e, false);
        y.set(f);
        DecisionVector z = minus;
        z.set(f, false);
        z.set(e);
        if (!independent(y) || !independent(z)) continue;
        if (a_weight(y, a) >= s)
          plus = std::move(y);
        else
          minus = std::move(y);
        swapped = true;
        break;
      }
      if (swapped) break;
    }
    if (!swapped) break;
  }
  return plus;
}

DecisionVector refine_matroid(const DecisionFamily& family, DecisionVector plus,
                              DecisionVector minus, std::span<const int> a,
                              std::span<const double> b, double lambda, int s) {
  if (const auto* t = family.as<SpanningTree>()) {
    const Graph& g = t->graph;
    return refine_matroid(
        [&g](const DecisionVector& x) {
          DisjointSets sets(g.num_vertices);
          for (int e : x.support())
            if (!sets.unite(g.edges[e].first, g.edges[e].second)) return false;
          return true;
        },
        std::move(plus), std::move(minus), a, b, lambda, s);
  }
  if (const auto* m = family.as<Matroid>())
    return refine_matroid(m->independent, std::move(plus), std::move(minus), a, b, lambda, s);
  throw ContractViolation("refine_matroid needs a spanning-tree or matroid family");
}

namespace {

bool matching_ok(const BipartiteGraph& g, const DecisionVector& x) {
  std::vector<char> left(g.num_left, 0), right(g.num_right, 0);
  for (int e : x.support()) {
    const auto [l, r] = g.edges[e];
    if (left[l] || right[r]) return false;
    left[l] = right[r] = 1;
  }
  return true;
}

struct Component {
  std::vector<int> walk;  // edges in path/cycle order
  bool cycle = false;
};

// Connected components (alternating paths and cycles) of an edge set in which
// every vertex has degree <= 2, ordered by smallest edge id.
std::vector<Component> edge_components(const BipartiteGraph& g, const DecisionVector& x) {
  const int nv = g.num_left + g.num_right;
  std::vector<std::vector<int>> incident(nv);
  auto ends = [&](int e) {
    return std::pair<int, int>{g.edges[e].first, g.num_left + g.edges[e].second};
  };
  for (int e : x.support()) {
    const auto [u, v] = ends(e);
    incident[u].push_back(e);
    incident[v].push_back(e);
  }
  std::vector<char> used(g.num_edges(), 0);
  std::vector<Component> comps;
  for (int e0 : x.support()) {
    if (used[e0]) continue;
    // Vertices of the component, to find a path end if there is one.
    std::vector<int> vertices;
    std::vector<char> seen(nv, 0);
    std::vector<int> stack{ends(e0).first};
    seen[ends(e0).first] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      vertices.push_back(v);
      for (int f : incident[v]) {
        const auto [p, q] = ends(f);
        const int w = p == v ? q : p;
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    Component comp;
    int start = nv;
    for (int v : vertices)
      if (incident[v].size() == 1) start = std::min(start, v);
    comp.cycle = start == nv;
    if (comp.cycle) start = ends(e0).first;
    int at = start, prev = -1;
    while (true) {
      int next = -1;
      for (int f : incident[at])
        if (f != prev && !used[f]) next = f;
      if (next == -1) break;
      used[next] = 1;
      comp.walk.push_back(next);
      const auto [p, q] = ends(next);
      at = p == at ? q : p;
      prev = next;
    }
    comps.push_back(std::move(comp));
  }
  return comps;
}

}  // namespace

DecisionVector refine_matching(const BipartiteGraph& graph, DecisionVector plus,
                               DecisionVector minus, std::span<const int> a,
                               std::span<const double> b, double lambda, int s) {
  (void)lambda;
  require(static_cast<int>(plus.dim()) == graph.num_edges() &&
              static_cast<int>(minus.dim()) == graph.num_edges(),
          "candidate dimension mismatch");
  if (a_weight(minus, a) >= s) return minus;
  while ((plus ^ minus).count() > 2) {
    const auto comps = edge_components(graph, plus ^ minus);
    if (comps.size() >= 2) {
      DecisionVector y = minus;
      for (int e : comps.front().walk) y.flip(e);
      if (a_weight(y, a) >= s)
        plus = std::move(y);
      else
        minus = std::move(y);
      continue;
    }
    // A single alternating path or cycle is left and cannot be split while
    // staying Lagrangian-optimal. Patch minus with contiguous pieces of it and
    // keep the best matching that meets the budget.
    const auto& walk = comps.front().walk;
    const bool cycle = comps.front().cycle;
    const int L = static_cast<int>(walk.size());
    DecisionVector best = plus;
    double best_b = plus.dot(b);
    for (int start = 0; start < L; ++start) {
      const int max_len = cycle ? L - 1 : L - start;
      for (int len = 1; len <= max_len; ++len) {
        DecisionVector y = minus;
        for (int k = 0; k < len; ++k) y.flip(walk[(start + k) % L]);
        if (a_weight(y, a) < s || !matching_ok(graph, y)) continue;
        const double yb = y.dot(b);
        if (yb > best_b) {
          best_b = yb;
          best = std::move(y);
        }
      }
    }
    return best;
  }
  return plus;
}

// ---------------------------------------------------------------------------
// 1/2-approximation with pinned elements

namespace {

enum class HalfKind { Graphic, Matroid, Matching };

struct HalfProblem {
  HalfKind kind;
  int d = 0;
  const Graph* graph = nullptr;
  const Matroid* matroid = nullptr;
  const BipartiteGraph* bipartite = nullptr;
  int pin_size = 0;
};

HalfProblem describe(const DecisionFamily& family) {
  if (const auto* t = family.as<SpanningTree>())
    return {HalfKind::Graphic, family.dim(), &t->graph, nullptr, nullptr, 2};
  if (const auto* m = family.as<Matroid>())
    return {HalfKind::Matroid, family.dim(), nullptr, m, nullptr, 2};
  if (const auto* bm = family.as<BipartiteMatching>())
    return {HalfKind::Matching, family.dim(), nullptr, nullptr, &bm->graph, 4};
  throw ContractViolation("budgeted_halfapprox needs a spanning-tree, matroid or matching family");
}

bool pins_valid(const HalfProblem& p, const DecisionVector& pins) {
  switch (p.kind) {
    case HalfKind::Graphic: {
      DisjointSets sets(p.graph->num_vertices);
      for (int e : pins.support())
        if (!sets.unite(p.graph->edges[e].first, p.graph->edges[e].second)) return false;
      return true;
    }
    case HalfKind::Matroid:
      return p.matroid->independent(pins);
    case HalfKind::Matching:
      return matching_ok(*p.bipartite, pins);
  }
  return false;
}

void collect_pins(const HalfProblem& p, int from, int left, DecisionVector& cur,
                  std::vector<DecisionVector>& out) {
  out.push_back(cur);
  if (left == 0) return;
  for (int e = from; e < p.d; ++e) {
    cur.set(e);
    if (pins_valid(p, cur)) collect_pins(p, e + 1, left - 1, cur, out);
    cur.set(e, false);
  }
}

// The sub-problem left after forcing `pins` into the solution and restricting
// the remaining elements to `allowed`.
struct Residual {
  const HalfProblem* problem = nullptr;
  DecisionVector pins;
  std::vector<char> allowed;
  std::vector<char> pinned_left, pinned_right;

  DecisionVector maximize(std::span<const double> w) const {
    const int d = problem->d;
    std::vector<int> order;
    for (int e = 0; e < d; ++e)
      if (allowed[e]) order.push_back(e);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return w[i] > w[j]; });
    DecisionVector x(d);
    switch (problem->kind) {
      case HalfKind::Graphic: {
        const Graph& g = *problem->graph;
        DisjointSets sets(g.num_vertices);
        for (int e : pins.support()) sets.unite(g.edges[e].first, g.edges[e].second);
        for (int e : order)
          if (sets.unite(g.edges[e].first, g.edges[e].second)) x.set(e);
        return x;
      }
      case HalfKind::Matroid: {
        const Matroid& m = *problem->matroid;
        DecisionVector with = pins;
        for (int e : order) {
          if (!m.bases_only && w[e] <= 0.0) break;
          with.set(e);
          if (m.independent(with))
            x.set(e);
          else
            with.set(e, false);
        }
        return x;
      }
      case HalfKind::Matching: {
        const BipartiteGraph& g = *problem->bipartite;
        std::vector<std::vector<int>> pick(g.num_left, std::vector<int>(g.num_right, -1));
        std::vector<std::vector<double>> profit(g.num_left, std::vector<double>(g.num_right, 0.0));
        for (int e = 0; e < d; ++e) {
          if (!allowed[e] || w[e] <= 0.0) continue;
          const auto [l, r] = g.edges[e];
          if (pick[l][r] == -1 || w[e] > w[pick[l][r]]) {
            pick[l][r] = e;
            profit[l][r] = w[e];
          }
        }
        const auto assignment = max_weight_assignment(profit);
        for (int l = 0; l < g.num_left; ++l) {
          const int r = assignment[l];
          if (r >= 0 && pick[l][r] != -1) x.set(pick[l][r]);
        }
        return x;
      }
    }
    return x;
  }

  bool independent(const DecisionVector& y) const {
    DecisionVector with = y | pins;
    switch (problem->kind) {
      case HalfKind::Graphic:
      case HalfKind::Matroid:
        return pins_valid(*problem, with);
      case HalfKind::Matching:
        return matching_ok(*problem->bipartite, with);
    }
    return false;
  }

  DecisionVector refine(const LagrangianCandidates& cand, std::span<const int> a,
                        std::span<const double> b, int s) const {
    if (problem->kind == HalfKind::Matching)
      return refine_matching(*problem->bipartite, cand.plus, cand.minus, a, b, cand.lambda, s);
    return refine_matroid([this](const DecisionVector& y) { return independent(y); }, cand.plus,
                          cand.minus, a, b, cand.lambda, s);
  }
};

bool feasible_combined(const HalfProblem& p, const DecisionVector& x) {
  switch (p.kind) {
    case HalfKind::Graphic:
      return static_cast<int>(x.count()) == p.graph->num_vertices - 1 && pins_valid(p, x);
    case HalfKind::Matroid: {
      if (!p.matroid->independent(x)) return false;
      if (!p.matroid->bases_only) return true;
      DecisionVector y = x;
      for (int e = 0; e < p.d; ++e) {
        if (x[e]) continue;
        y.set(e);
        const bool extends = p.matroid->independent(y);
        y.set(e, false);
        if (extends) return false;
      }
      return true;
    }
    case HalfKind::Matching:
      return matching_ok(*p.bipartite, x);
  }
  return false;
}

// Per-pin state shared by every budget.
struct PinRun {
  Residual residual;
  long pin_a = 0;
  DecisionVector lo;  // b-maximizer of the residual
  DecisionVector hi;  // a-maximizer of the residual
  long lo_a = 0, hi_a = 0;
};

std::vector<PinRun> prepare_pins(const HalfProblem& p, std::span<const int> a,
                                 std::span<const double> b) {
  std::vector<DecisionVector> pin_sets;
  DecisionVector cur(p.d);
  collect_pins(p, 0, p.pin_size, cur, pin_sets);
  const std::vector<double> ad(a.begin(), a.end());
  std::vector<PinRun> runs;
  runs.reserve(pin_sets.size());
  for (auto& pins : pin_sets) {
    PinRun run;
    run.residual.problem = &p;
    double min_b = std::numeric_limits<double>::infinity();
    for (int e : pins.support()) min_b = std::min(min_b, b[e]);
    run.residual.allowed.assign(p.d, 0);
    if (p.kind == HalfKind::Matching) {
      run.residual.pinned_left.assign(p.bipartite->num_left, 0);
      run.residual.pinned_right.assign(p.bipartite->num_right, 0);
      for (int e : pins.support()) {
        run.residual.pinned_left[p.bipartite->edges[e].first] = 1;
        run.residual.pinned_right[p.bipartite->edges[e].second] = 1;
      }
    }
    for (int e = 0; e < p.d; ++e) {
      if (pins[e] || b[e] > min_b) continue;
      if (p.kind == HalfKind::Matching) {
        const auto [l, r] = p.bipartite->edges[e];
        if (run.residual.pinned_left[l] || run.residual.pinned_right[r]) continue;
      }
      run.residual.allowed[e] = 1;
    }
    run.pin_a = a_weight(pins, a);
    run.residual.pins = std::move(pins);
    run.lo = run.residual.maximize(b);
    run.hi = run.residual.maximize(ad);
    run.lo_a = a_weight(run.lo, a);
    run.hi_a = a_weight(run.hi, a);
    runs.push_back(std::move(run));
  }
  return runs;
}

std::optional<DecisionVector> solve_budget(const HalfProblem& p, const std::vector<PinRun>& runs,
                                           std::span<const int> a, std::span<const double> b,
                                           int s) {
  std::optional<DecisionVector> best;
  double best_b = kNegInf;
  for (const auto& run : runs) {
    const int s_res = static_cast<int>(std::max<long>(0, s - run.pin_a));
    if (run.hi_a < s_res) continue;
    DecisionVector part;
    if (run.lo_a >= s_res) {
      part = run.lo;
    } else {
      const auto& res = run.residual;
      const LinearOracle oracle = [&res](std::span<const double> w) { return res.maximize(w); };
      const auto cand = cutting_plane(oracle, a, b, s_res, run.lo, run.hi);
      part = res.refine(cand, a, b, s_res);
    }
    DecisionVector x = part | run.residual.pins;
    if (a_weight(x, a) < s || !feasible_combined(p, x)) continue;
    const double xb = x.dot(b);
    if (!best || xb > best_b) {
      best_b = xb;
      best = std::move(x);
    }
  }
  return best;
}

}  // namespace

std::optional<DecisionVector> budgeted_halfapprox(const DecisionFamily& family,
                                                  std::span<const int> a,
                                                  std::span<const double> b, int s) {
  const HalfProblem p = describe(family);
  check_budget_inputs(a, b, static_cast<std::size_t>(p.d), std::max(s, 0));
  const auto runs = prepare_pins(p, a, b);
  return solve_budget(p, runs, a, b, s);
}

BudgetTable budgeted_halfapprox_all(const DecisionFamily& family, std::span<const int> a,
                                    std::span<const double> b, int s_max) {
  const HalfProblem p = describe(family);
  check_budget_inputs(a, b, static_cast<std::size_t>(p.d), s_max);
  const auto runs = prepare_pins(p, a, b);
  long reachable = 0;
  for (const auto& run : runs) reachable = std::max(reachable, run.pin_a + run.hi_a);
  std::vector<std::optional<BudgetEntry>> entries(s_max + 1);
  for (int s = 0; s <= s_max && s <= reachable; ++s) {
    if (auto x = solve_budget(p, runs, a, b, s)) {
      const double v = x->dot(b);
      entries[s] = BudgetEntry{std::move(*x), v};
    }
  }
  return BudgetTable::from_entries(std::move(entries));
}

}  // namespace combisb
