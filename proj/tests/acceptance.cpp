// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "combisb/budgeted.hpp"
#include "combisb/cli.hpp"
#include "combisb/oracle.hpp"
#include "combisb/sim.hpp"
#include "support.hpp"

using namespace combisb;
using namespace combisb::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double a_weight(const DecisionVector& x, std::span<const int> a) {
  double t = 0.0;
  for (int i : x.support()) t += a[i];
  return t;
}

bool close_relative(double got, double want) {
  return got == want || std::abs(got - want) <= 1e-9 * std::abs(want);
}

// Compares a full budget table with brute_p3 for every s; returns mismatches.
long compare_table(const DecisionFamily& family, const BudgetTable& table, std::span<const int> a,
                   std::span<const double> b, int s_max) {
  const std::vector<double> ad(a.begin(), a.end());
  long bad = 0;
  for (int s = 0; s <= s_max; ++s) {
    const auto want = brute_p3(family, ad, b, s);
    if (table.feasible(s) != want.has_value()) {
      ++bad;
      continue;
    }
    if (!want) continue;
    const auto x = table.decision(s);
    if (!close_relative(table.value(s), want->value) || !contains(family, x) ||
        a_weight(x, a) < s)
      ++bad;
  }
  return bad;
}

Outcome exact_solvers() {
  Clock clock;
  TestRng rng(20240601);
  long bad = 0, budgets = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = uniform_int(rng, 1, 10);
    const auto family = random_knapsack(rng, d, 1, 5);
    const auto* ks = family.as<Knapsack>();
    const int xi = uniform_int(rng, 1, 40);
    const auto a = random_ints(rng, d, 1, xi);
    const auto b = random_reals(rng, d);
    const int s_max = max_support(family) * xi;
    bad += compare_table(family, budgeted_knapsack_all(ks->A, ks->c, a, b, s_max), a, b, s_max);
    budgets += s_max + 1;
  }
  for (int trial = 0; trial < 200; ++trial) {
    const int n = uniform_int(rng, 2, 7);
    const auto dag = complete_dag(n);
    const auto family = DecisionFamily::path_dag(dag, 0, n - 1);
    const int xi = uniform_int(rng, 1, 40);
    const auto a = random_ints(rng, family.dim(), 1, xi);
    const auto b = random_reals(rng, family.dim());
    const int s_max = (n - 1) * xi;
    bad += compare_table(family, budgeted_path_all(dag, 0, n - 1, a, b, s_max), a, b, s_max);
    budgets += s_max + 1;
  }
  const double secs = clock.seconds();
  return {bad == 0 && secs < 120.0,
          fmt("%ld budgets over 400 instances, %ld mismatches, %.1f s (limit 120 s)", budgets, bad, secs)};
}

Outcome half_approximation() {
  Clock clock;
  TestRng rng(777);
  long bad = 0, checked = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 400; ++trial) {
    const auto family =
        trial < 200
            ? DecisionFamily::spanning_tree(random_connected_graph(rng, uniform_int(rng, 2, 6), 0.5))
            : DecisionFamily::bipartite_matching(
                  random_bipartite(rng, uniform_int(rng, 1, 3), uniform_int(rng, 1, 3), 0.75));
    const int xi = uniform_int(rng, 1, 10);
    const auto a = random_ints(rng, family.dim(), 1, xi);
    const auto b = random_reals(rng, family.dim());
    const std::vector<double> ad(a.begin(), a.end());
    const int s_max = max_support(family) * xi;
    for (int s = 0; s <= s_max; ++s) {
      const auto want = brute_p3(family, ad, b, s);
      const auto got = budgeted_halfapprox(family, a, b, s);
      if (got.has_value() != want.has_value()) {
        ++bad;
        continue;
      }
      if (!want) continue;
      ++checked;
      if (!contains(family, *got) || a_weight(*got, a) < s || got->dot(b) < 0.5 * want->value - 1e-12)
        ++bad;
      if (want->value > 0) worst = std::min(worst, got->dot(b) / want->value);
    }
  }
  const double secs = clock.seconds();
  return {bad == 0 && secs < 300.0,
          fmt("%ld feasible budgets, %ld violations, worst ratio %.3f, %.1f s (limit 300 s)", checked,
              bad, worst, secs)};
}

Outcome index_soundness() {
  Clock clock;
  const std::pair<const char*, int> instances[] = {{"msets", 8}, {"trees", 5}, {"paths", 5}, {"matchings", 2}};
  long rounds = 0, violations = 0;
  double tightest = std::numeric_limits<double>::infinity();
  for (FMode mode : {FMode::Theory, FMode::LogOnly}) {
    for (const auto& [name, size] : instances) {
      const auto env = standard_config(name, size);
      PolicyConfig cfg;
      cfg.f_mode = mode;
      const double eps = epsilon_for(cfg, env.family());
      run_path(env, PolicyKind::Aescb, cfg, 500, 1, [&](const Statistics& s, const DecisionVector& x) {
        if (!s.all_sampled()) return;
        const auto s2 = sigma_squared(s, cfg.f_mode, cfg.alpha);
        const double lhs = brute_p2(env.family(), s.theta_hat(), s2).value;
        const double rhs = delta_at(cfg, s.round()) + x.dot(s.theta_hat()) + std::sqrt(x.dot(s2)) / eps;
        ++rounds;
        tightest = std::min(tightest, rhs - lhs);
        if (lhs > rhs + 1e-12) ++violations;
      });
    }
  }
  const double secs = clock.seconds();
  return {violations == 0 && secs < 600.0,
          fmt("%ld rounds checked (theory and log f), %ld violations, min slack %.2e, %.1f s", rounds,
              violations, tightest, secs)};
}

std::vector<double> mean_curve(const std::vector<RegretTrace>& traces) {
  std::vector<double> mean(traces.front().cum_regret.size(), 0.0);
  for (const auto& tr : traces)
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += tr.cum_regret[i] / traces.size();
  return mean;
}

// Regret added in the last quarter versus the first quarter of the horizon.
std::pair<double, double> quartile_slopes(const std::vector<double>& curve) {
  const std::size_t T = curve.size(), q = T / 4;
  return {curve[q - 1] / q, (curve[T - 1] - curve[T - 1 - q]) / q};
}

MeanCi final_regret(const std::vector<RegretTrace>& traces) {
  const long rounds[] = {static_cast<long>(traces.front().cum_regret.size())};
  return aggregate(traces, rounds).front().regret;
}

Outcome aescb_close_to_escb() {
  Clock clock;
  const auto env = standard_config("msets", 10);
  PolicyConfig cfg;
  cfg.f_mode = FMode::LogOnly;
  const auto escb = run(env, PolicyKind::Escb, cfg, 1000, 10, 1);
  const auto aescb = run(env, PolicyKind::Aescb, cfg, 1000, 10, 1);
  const auto re = final_regret(escb), ra = final_regret(aescb);
  const auto [e_first, e_last] = quartile_slopes(mean_curve(escb));
  const auto [a_first, a_last] = quartile_slopes(mean_curve(aescb));
  const bool ratio_ok = ra.mean <= 1.3 * re.mean;
  const bool slopes_ok = e_last <= 0.5 * e_first && a_last <= 0.5 * a_first;
  const double secs = clock.seconds();
  return {ratio_ok && slopes_ok && secs < 600.0,
          fmt("R(T) AESCB %.2f +- %.2f vs ESCB %.2f +- %.2f (ratio %.3f, limit 1.3); quartile slopes "
              "ESCB %.4f -> %.4f, AESCB %.4f -> %.4f; %.1f s",
              ra.mean, ra.halfwidth, re.mean, re.halfwidth, ra.mean / re.mean, e_first, e_last, a_first,
              a_last, secs)};
}

Outcome baseline_ordering() {
  PolicyConfig cfg;
  auto regret = [&](const char* name, int size, PolicyKind kind) {
    return final_regret(run(standard_config(name, size), kind, cfg, 1000, 10, 1));
  };
  auto overlap = [](const MeanCi& x, const MeanCi& y) {
    return std::abs(x.mean - y.mean) <= x.halfwidth + y.halfwidth;
  };
  const auto t_escb = regret("trees", 5, PolicyKind::Escb);
  const auto t_aescb = regret("trees", 5, PolicyKind::Aescb);
  const auto t_cucb = regret("trees", 5, PolicyKind::Cucb);
  const auto p_cucb = regret("paths", 10, PolicyKind::Cucb);
  const auto p_aescb = regret("paths", 10, PolicyKind::Aescb);
  const bool ok = t_escb.mean < t_cucb.mean && t_aescb.mean < t_cucb.mean && p_cucb.mean < p_aescb.mean;
  const bool flagged =
      overlap(t_escb, t_cucb) || overlap(t_aescb, t_cucb) || overlap(p_cucb, p_aescb);
  return {ok, fmt("trees5: ESCB %.1f +- %.1f, AESCB %.1f +- %.1f, CUCB %.1f +- %.1f; paths10: CUCB %.1f "
                  "+- %.1f, AESCB %.1f +- %.1f%s",
                  t_escb.mean, t_escb.halfwidth, t_aescb.mean, t_aescb.halfwidth, t_cucb.mean,
                  t_cucb.halfwidth, p_cucb.mean, p_cucb.halfwidth, p_aescb.mean, p_aescb.halfwidth,
                  flagged ? " [flagged: confidence bands overlap]" : "")};
}

// Least-squares slope of log(time) against log(d).
double growth_exponent(const std::vector<double>& ds, const std::vector<double>& times) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    mx += std::log(ds[i]) / ds.size();
    my += std::log(times[i]) / ds.size();
  }
  double num = 0, den = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    num += (std::log(ds[i]) - mx) * (std::log(times[i]) - my);
    den += (std::log(ds[i]) - mx) * (std::log(ds[i]) - mx);
  }
  return num / den;
}

// Mean select time over the second half of the horizon, averaged over paths.
double select_time(const Environment& env, const PolicyConfig& cfg) {
  const auto traces = run(env, PolicyKind::Aescb, cfg, 1000, 3, 1);
  double total = 0.0;
  long n = 0;
  for (const auto& tr : traces)
    for (std::size_t i = tr.select_seconds.size() / 2; i < tr.select_seconds.size(); ++i, ++n)
      total += tr.select_seconds[i];
  return total / n;
}

Outcome timing_scaling() {
  const std::vector<double> ds{10, 20, 50};
  std::vector<double> standard, fixed_m;
  PolicyConfig cfg;
  for (double d : ds) {
    standard.push_back(select_time(standard_config("msets", static_cast<int>(d)), cfg));
    std::vector<double> theta(static_cast<int>(d), 0.4);
    for (int i = 0; i < d / 2; ++i) theta[i] = 0.55;
    fixed_m.push_back(select_time(Environment(DecisionFamily::mset(static_cast<int>(d), 3), theta), cfg));
  }
  const double k = growth_exponent(ds, standard);
  const double k_fixed = growth_exponent(ds, fixed_m);
  return {k <= 2.0,
          fmt("m = floor(d/3): %.3g / %.3g / %.3g ms per round at d = 10/20/50, exponent %.2f (limit 2); "
              "for reference m = 3 fixed: exponent %.2f",
              standard[0] * 1e3, standard[1] * 1e3, standard[2] * 1e3, k, k_fixed)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Drops the trailing select_seconds column of each trace row.
std::string without_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::string out, line;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "combisb_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto config = [&](bool timing) {
    const fs::path p = dir / (timing ? "timed.yaml" : "plain.yaml");
    std::ofstream(p) << "schema: 1\nexperiments:\n"
                     << "  - name: msets\n    family: msets\n    size: 10\n"
                     << "    policies: [cucb, ts, escb, aescb]\n    horizon: 300\n    paths: 4\n"
                     << "    timing: " << (timing ? "true" : "false") << "\n"
                     << "  - name: trees\n    family: trees\n    size: 4\n"
                     << "    policies: [ts, aescb]\n    alpha: [0.1, 0.5]\n    horizon: 200\n    paths: 3\n"
                     << "    timing: " << (timing ? "true" : "false") << "\n";
    return p.string();
  };
  std::ostringstream sink;
  long files = 0, differ = 0, timed_differ = 0;
  for (bool timing : {false, true}) {
    const auto cfg = config(timing);
    const fs::path a = dir / (timing ? "ta" : "a"), b = dir / (timing ? "tb" : "b");
    if (cmd_run(cfg, a.string(), 1, sink, sink) != kExitOk || cmd_run(cfg, b.string(), 2, sink, sink) != kExitOk)
      return {false, "cli run failed: " + sink.str()};
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
      if (!entry.is_regular_file() || entry.path().filename() == "summary.csv") continue;
      const auto rel = fs::relative(entry.path(), a);
      const auto x = slurp(entry.path()), y = slurp(b / rel);
      if (!timing) {
        ++files;
        if (x != y) ++differ;
      } else if (without_timing(x) != without_timing(y)) {
        ++timed_differ;
      }
    }
    if (!timing && slurp(a / "summary.csv") != slurp(b / "summary.csv")) ++differ;
  }
  fs::remove_all(dir);
  return {files > 0 && differ == 0 && timed_differ == 0,
          fmt("%ld trace CSVs plus summary byte-identical across runs (1 vs 2 threads): %s; with timing "
              "on, non-timing columns identical: %s",
              files, differ == 0 ? "yes" : "no", timed_differ == 0 ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const Criterion criteria[] = {
      {"exact-solver oracle equivalence", exact_solvers},
      {"half-approximation guarantee", half_approximation},
      {"AESCB index soundness", index_soundness},
      {"AESCB regret close to ESCB", aescb_close_to_escb},
      {"baseline ordering (soft)", baseline_ordering},
      {"AESCB selection time scaling", timing_scaling},
      {"determinism", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << o.detail << std::endl;
    if (!o.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
