#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "combisb/decision.hpp"
#include "combisb/family.hpp"
#include "combisb/policies.hpp"
#include "combisb/rng.hpp"

namespace combisb {

// Bernoulli semi-bandit environment with mean vector theta.
class Environment {
 public:
  Environment(DecisionFamily family, std::vector<double> theta);

  const DecisionFamily& family() const { return family_; }
  const std::vector<double>& theta() const { return theta_; }
  const DecisionVector& optimal() const { return x_star_; }
  double optimal_value() const { return opt_value_; }
  int m() const { return m_; }
  // Smallest nonzero gap; needs enumeration, nullopt if the family is too large.
  std::optional<double> gap_min(std::size_t cap = kDefaultEnumerationCap) const;

 private:
  DecisionFamily family_;
  std::vector<double> theta_;
  DecisionVector x_star_;
  double opt_value_ = 0.0;
  int m_ = 0;
};

std::vector<double> draw_feedback(const Environment& env, const DecisionVector& x, Rng& rng);
double instantaneous_gap(const Environment& env, const DecisionVector& x);

struct RegretTrace {
  std::uint64_t seed = 0;
  std::vector<double> gap;             // per round
  std::vector<double> cum_regret;      // R(t)
  std::vector<double> select_seconds;  // wall time of the select call
};

// Called after each selection, before the statistics are updated.
using RoundObserver = std::function<void(const Statistics& before, const DecisionVector& x)>;

RegretTrace run_path(const Environment& env, PolicyKind kind, const PolicyConfig& config,
                     long horizon, std::uint64_t seed, const RoundObserver& observer = {});

// n_paths runs with seeds base_seed + i, returned in seed order. threads = 0: one per core.
std::vector<RegretTrace> run(const Environment& env, PolicyKind kind, const PolicyConfig& config,
                             long horizon, int n_paths, std::uint64_t base_seed,
                             unsigned threads = 1);

struct MeanCi {
  double mean = 0.0;
  double halfwidth = 0.0;  // 1.96 sqrt(sample variance / n)
};

MeanCi mean_ci(std::span<const double> samples);

struct AggregateRow {
  long round = 0;
  MeanCi regret;
};

// Mean cumulative regret and 95% halfwidth at each requested round (1-based).
std::vector<AggregateRow> aggregate(std::span<const RegretTrace> traces,
                                    std::span<const long> rounds);

// Per-path mean select time, aggregated over paths.
MeanCi aggregate_select_seconds(std::span<const RegretTrace> traces);

// Experiment instances: "msets" (size d), "paths" / "trees" (size |V|),
// "matchings" (size |V1| = |V2|).
Environment standard_config(const std::string& name, int size);

// CSV: path_id,t,gap,cum_regret,select_seconds
void write_traces_csv(std::ostream& out, std::span<const RegretTrace> traces,
                      bool with_timing = true);

std::string format_number(double v);  // 17 significant digits

}  // namespace combisb
