#include "combisb/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "combisb/errors.hpp"
#include "combisb/oracle.hpp"
#include "combisb/sim.hpp"

namespace combisb {

namespace {

constexpr double kTol = 1e-9;

class Checker {
 public:
  explicit Checker(SuiteResult& r) : r_(r) {}

  void expect(bool ok, const std::function<std::string()>& what) {
    ++r_.checks;
    if (ok || !r_.passed) return;
    r_.passed = false;
    r_.first_failure = what();
  }

 private:
  SuiteResult& r_;
};

int draw_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<double> draw_reals(Rng& rng, int d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(d);
  for (auto& x : v) x = u(rng);
  return v;
}

std::vector<int> draw_ints(Rng& rng, int d, int lo, int hi) {
  std::vector<int> v(d);
  for (auto& x : v) x = draw_int(rng, lo, hi);
  return v;
}

Graph draw_connected_graph(Rng& rng, int n) {
  Graph g;
  g.num_vertices = n;
  for (int v = 1; v < n; ++v) g.edges.emplace_back(draw_int(rng, 0, v - 1), v);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (draw_int(rng, 0, 1) == 1) g.edges.emplace_back(u, v);
  return g;
}

BipartiteGraph draw_bipartite(Rng& rng, int left, int right) {
  BipartiteGraph g = complete_bipartite(left, right);
  std::vector<std::pair<int, int>> kept;
  for (const auto& e : g.edges)
    if (draw_int(rng, 0, 3) > 0) kept.push_back(e);
  g.edges = std::move(kept);
  return g;
}

std::string describe(const char* what, int trial, int s, double got, double want) {
  std::ostringstream os;
  os << what << " trial " << trial << " s=" << s << ": got " << got << ", expected " << want;
  return os.str();
}

double a_weight(const DecisionVector& x, std::span<const int> a) {
  double t = 0.0;
  for (int i : x.support()) t += a[i];
  return t;
}

void check_table(Checker& c, const char* what, int trial, const DecisionFamily& family,
                 const BudgetTable& table, std::span<const int> a, std::span<const double> b,
                 int s_max) {
  const std::vector<double> ad(a.begin(), a.end());
  for (int s = 0; s <= s_max; ++s) {
    const auto want = brute_p3(family, ad, b, s);
    c.expect(table.feasible(s) == want.has_value(),
             [&] { return describe(what, trial, s, table.feasible(s), want.has_value()); });
    if (!want || !table.feasible(s)) continue;
    const double got = table.value(s);
    c.expect(std::abs(got - want->value) <= kTol * std::max(1.0, std::abs(want->value)),
             [&] { return describe(what, trial, s, got, want->value); });
    const auto x = table.decision(s);
    c.expect(contains(family, x) && a_weight(x, a) >= s && std::abs(x.dot(b) - got) <= kTol,
             [&] { return describe(what, trial, s, x.dot(b), got); });
  }
}

void suite_p1(Checker& c, const Solvers& solvers) {
  Rng rng = make_stream(101, StreamPurpose::Policy);
  for (int trial = 0; trial < 200; ++trial) {
    DecisionFamily family = DecisionFamily::mset(1, 1);
    switch (trial % 5) {
      case 0: {
        const int d = draw_int(rng, 2, 10);
        family = DecisionFamily::mset(d, draw_int(rng, 1, d));
        break;
      }
      case 1: {
        const int n = draw_int(rng, 2, 6);
        family = DecisionFamily::path_dag(complete_dag(n), 0, n - 1);
        break;
      }
      case 2: family = DecisionFamily::spanning_tree(draw_connected_graph(rng, draw_int(rng, 2, 6))); break;
      case 3: family = DecisionFamily::bipartite_matching(draw_bipartite(rng, 3, 3)); break;
      default: {
        const int d = draw_int(rng, 2, 8);
        family = DecisionFamily::knapsack({draw_ints(rng, d, 0, 3)}, {draw_int(rng, 1, 5)});
      }
    }
    auto w = draw_reals(rng, family.dim());
    for (auto& v : w) v -= 0.3;
    const auto want = brute_p1(family, w);
    const auto got = solvers.linear(family, w);
    c.expect(contains(family, got) && std::abs(got.dot(w) - want.value) <= kTol,
             [&] { return describe("linear_maximize", trial, 0, got.dot(w), want.value); });
  }
}

void suite_knapsack(Checker& c, const Solvers& solvers) {
  Rng rng = make_stream(102, StreamPurpose::Policy);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = draw_int(rng, 1, 8);
    const std::vector<std::vector<int>> A{draw_ints(rng, d, 0, 3)};
    const std::vector<int> cap{draw_int(rng, 1, 5)};
    const auto family = DecisionFamily::knapsack(A, cap);
    const int xi = draw_int(rng, 1, 12);
    const auto a = draw_ints(rng, d, 1, xi);
    const auto b = draw_reals(rng, d);
    const int s_max = max_support(family) * xi;
    check_table(c, "knapsack", trial, family, solvers.knapsack_all(A, cap, a, b, s_max), a, b, s_max);
  }
}

void suite_paths(Checker& c, const Solvers& solvers) {
  Rng rng = make_stream(103, StreamPurpose::Policy);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = draw_int(rng, 2, 6);
    const auto dag = complete_dag(n);
    const auto family = DecisionFamily::path_dag(dag, 0, n - 1);
    const int xi = draw_int(rng, 1, 12);
    const auto a = draw_ints(rng, family.dim(), 1, xi);
    const auto b = draw_reals(rng, family.dim());
    const int s_max = (n - 1) * xi;
    check_table(c, "paths", trial, family, solvers.path_all(dag, 0, n - 1, a, b, s_max), a, b, s_max);
  }
}

void suite_halfapprox(Checker& c, const Solvers& solvers) {
  Rng rng = make_stream(104, StreamPurpose::Policy);
  for (int trial = 0; trial < 200; ++trial) {
    const auto family =
        trial % 2 == 0
            ? DecisionFamily::spanning_tree(draw_connected_graph(rng, draw_int(rng, 2, 6)))
            : DecisionFamily::bipartite_matching(draw_bipartite(rng, draw_int(rng, 1, 3), 3));
    const auto a = draw_ints(rng, family.dim(), 1, 5);
    const auto b = draw_reals(rng, family.dim());
    const std::vector<double> ad(a.begin(), a.end());
    const int top = static_cast<int>(brute_p1(family, ad).value);
    const int s = draw_int(rng, 0, top + 1);
    const auto want = brute_p3(family, ad, b, s);
    const auto got = solvers.halfapprox(family, a, b, s);
    c.expect(got.has_value() == want.has_value(),
             [&] { return describe("halfapprox feasibility", trial, s, got.has_value(), want.has_value()); });
    if (!got || !want) continue;
    c.expect(contains(family, *got) && a_weight(*got, a) >= s && got->dot(b) >= 0.5 * want->value - kTol,
             [&] { return describe("halfapprox", trial, s, got->dot(b), 0.5 * want->value); });
  }
}

void suite_index_bound(Checker& c, const Solvers& solvers) {
  const std::pair<const char*, int> instances[] = {{"msets", 6}, {"trees", 4}, {"paths", 4}, {"matchings", 2}};
  for (const auto& [name, size] : instances) {
    const auto env = standard_config(name, size);
    PolicyConfig cfg;
    cfg.f_mode = FMode::Theory;
    const double eps = epsilon_for(cfg, env.family());
    Rng env_rng = make_stream(7, StreamPurpose::Environment);
    Statistics stats(env.family().dim(), env.m());
    long checked = 0;
    for (long t = 1; t <= 200; ++t) {
      const auto x = solvers.aescb(env.family(), stats, cfg);
      if (stats.all_sampled()) {
        ++checked;
        const auto s2 = sigma_squared(stats, cfg.f_mode, cfg.alpha);
        const double lhs = brute_p2(env.family(), stats.theta_hat(), s2).value;
        const double rhs = delta_at(cfg, t) + x.dot(stats.theta_hat()) + std::sqrt(x.dot(s2)) / eps;
        c.expect(contains(env.family(), x) && lhs <= rhs + kTol, [&] {
          return std::string(name) + " round " + std::to_string(t) + ": index bound violated";
        });
      }
      if (!contains(env.family(), x)) break;
      stats.update(x, draw_feedback(env, x, env_rng));
    }
    c.expect(checked > 0, [&] { return std::string(name) + ": initialization never completed"; });
  }
}

}  // namespace

const std::vector<std::string>& selftest_suites() {
  static const std::vector<std::string> names{"p1", "knapsack", "paths", "halfapprox", "index_bound"};
  return names;
}

SuiteResult run_suite(const std::string& name, const Solvers& solvers) {
  const auto& names = selftest_suites();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw ContractViolation("unknown selftest suite '" + name + "'");
  SuiteResult r;
  r.name = name;
  Checker c(r);
  const auto start = std::chrono::steady_clock::now();
  try {
    if (name == "p1") suite_p1(c, solvers);
    else if (name == "knapsack") suite_knapsack(c, solvers);
    else if (name == "paths") suite_paths(c, solvers);
    else if (name == "halfapprox") suite_halfapprox(c, solvers);
    else suite_index_bound(c, solvers);
  } catch (const std::exception& e) {
    r.passed = false;
    r.first_failure = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace combisb
