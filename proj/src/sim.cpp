#include "combisb/sim.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "combisb/errors.hpp"

namespace combisb {

Environment::Environment(DecisionFamily family, std::vector<double> theta)
    : family_(std::move(family)), theta_(std::move(theta)) {
  require(static_cast<int>(theta_.size()) == family_.dim(), "theta must have length d");
  for (double v : theta_) require(v >= 0.0 && v <= 1.0, "theta must lie in [0,1]");
  x_star_ = linear_maximize(family_, theta_);
  opt_value_ = x_star_.dot(theta_);
  m_ = max_support(family_);
}

std::optional<double> Environment::gap_min(std::size_t cap) const {
  std::vector<DecisionVector> all;
  try {
    all = enumerate(family_, cap);
  } catch (const SetTooLarge&) {
    return std::nullopt;
  }
  std::optional<double> best;
  for (const auto& x : all) {
    const double gap = opt_value_ - x.dot(theta_);
    if (gap > 1e-12 && (!best || gap < *best)) best = gap;
  }
  return best;
}

namespace {
double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
}  // namespace

std::vector<double> draw_feedback(const Environment& env, const DecisionVector& x, Rng& rng) {
  require(contains(env.family(), x), "feedback requested for an infeasible decision");
  std::vector<double> y(x.dim(), 0.0);
  for (int i : x.support()) y[i] = uniform01(rng) < env.theta()[i] ? 1.0 : 0.0;
  return y;
}

double instantaneous_gap(const Environment& env, const DecisionVector& x) {
  return std::max(0.0, env.optimal_value() - x.dot(env.theta()));
}

RegretTrace run_path(const Environment& env, PolicyKind kind, const PolicyConfig& config,
                     long horizon, std::uint64_t seed, const RoundObserver& observer) {
  require(horizon >= 1, "horizon must be >= 1");
  RegretTrace trace;
  trace.seed = seed;
  trace.gap.reserve(horizon);
  trace.cum_regret.reserve(horizon);
  trace.select_seconds.reserve(horizon);
  Rng env_rng = make_stream(seed, StreamPurpose::Environment);
  Rng policy_rng = make_stream(seed, StreamPurpose::Policy);
  Statistics stats(env.family().dim(), env.m());
  double cumulative = 0.0;
  for (long t = 1; t <= horizon; ++t) {
    const auto start = std::chrono::steady_clock::now();
    const DecisionVector x = select(kind, env.family(), stats, config, policy_rng);
    const auto stop = std::chrono::steady_clock::now();
    if (observer) observer(stats, x);
    const auto y = draw_feedback(env, x, env_rng);
    stats.update(x, y);
    const double gap = instantaneous_gap(env, x);
    cumulative += gap;
    trace.gap.push_back(gap);
    trace.cum_regret.push_back(cumulative);
    trace.select_seconds.push_back(std::chrono::duration<double>(stop - start).count());
  }
  return trace;
}

std::vector<RegretTrace> run(const Environment& env, PolicyKind kind, const PolicyConfig& config,
                             long horizon, int n_paths, std::uint64_t base_seed,
                             unsigned threads) {
  require(n_paths >= 1, "need at least one sample path");
  require(horizon >= 1, "horizon must be >= 1");
  if (kind == PolicyKind::Escb) {
    try {
      (void)enumerate(env.family(), config.enumeration_cap);
    } catch (const SetTooLarge& e) {
      throw SetTooLarge(std::string(e.what()) + "; exact ESCB needs enumeration, use AESCB");
    }
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n_paths));

  std::vector<RegretTrace> traces(n_paths);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (int i = next++; i < n_paths && !failed; i = next++) {
      try {
        traces[i] = run_path(env, kind, config, horizon, base_seed + static_cast<std::uint64_t>(i));
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return traces;
}

MeanCi mean_ci(std::span<const double> samples) {
  require(!samples.empty(), "mean of an empty sample");
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= n;
  if (samples.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double var = ss / (n - 1.0);
  return {mean, 1.96 * std::sqrt(var / n)};
}

std::vector<AggregateRow> aggregate(std::span<const RegretTrace> traces,
                                    std::span<const long> rounds) {
  require(traces.size() >= 2, "aggregate needs at least two traces");
  std::vector<AggregateRow> rows;
  std::vector<double> column(traces.size());
  for (long t : rounds) {
    for (std::size_t p = 0; p < traces.size(); ++p) {
      require(t >= 1 && static_cast<std::size_t>(t) <= traces[p].cum_regret.size(),
              "requested round outside the trace");
      column[p] = traces[p].cum_regret[t - 1];
    }
    rows.push_back({t, mean_ci(column)});
  }
  return rows;
}

MeanCi aggregate_select_seconds(std::span<const RegretTrace> traces) {
  std::vector<double> per_path;
  for (const auto& tr : traces) per_path.push_back(mean_ci(tr.select_seconds).mean);
  return mean_ci(per_path);
}

Environment standard_config(const std::string& name, int size) {
  if (name == "msets") {
    require(size >= 3, "msets needs d >= 3");
    std::vector<double> theta(size);
    for (int i = 0; i < size; ++i) theta[i] = (i + 1) <= size / 2 ? 0.55 : 0.4;
    return Environment(DecisionFamily::mset(size, size / 3), std::move(theta));
  }
  if (name == "paths") {
    require(size >= 2, "paths needs |V| >= 2");
    Digraph g = complete_dag(size);
    std::vector<double> theta(g.num_edges(), 0.4);
    for (int e = 0; e < g.num_edges(); ++e)
      if (g.edges[e] == std::pair{0, size - 1}) theta[e] = 0.55;
    return Environment(DecisionFamily::path_dag(std::move(g), 0, size - 1), std::move(theta));
  }
  if (name == "trees") {
    require(size >= 2, "trees needs |V| >= 2");
    Graph g = complete_graph(size);
    std::vector<double> theta(g.num_edges(), 0.4);
    for (int e = 0; e < g.num_edges(); ++e)
      if (g.edges[e].first == 0) theta[e] = 0.55;
    return Environment(DecisionFamily::spanning_tree(std::move(g)), std::move(theta));
  }
  if (name == "matchings") {
    require(size >= 1, "matchings needs |V1| >= 1");
    BipartiteGraph g = complete_bipartite(size, size);
    std::vector<double> theta(g.num_edges(), 0.4);
    for (int e = 0; e < g.num_edges(); ++e)
      if (g.edges[e].first == g.edges[e].second) theta[e] = 0.55;
    return Environment(DecisionFamily::bipartite_matching(std::move(g)), std::move(theta));
  }
  throw ContractViolation("unknown experiment configuration '" + name + "'");
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_traces_csv(std::ostream& out, std::span<const RegretTrace> traces, bool with_timing) {
  out << "path_id,t,gap,cum_regret,select_seconds\n";
  for (std::size_t p = 0; p < traces.size(); ++p) {
    const auto& tr = traces[p];
    for (std::size_t i = 0; i < tr.gap.size(); ++i) {
      out << p << ',' << (i + 1) << ',' << format_number(tr.gap[i]) << ','
          << format_number(tr.cum_regret[i]) << ','
          << format_number(with_timing ? tr.select_seconds[i] : 0.0) << '\n';
    }
  }
}

}  // namespace combisb
