#include "combisb/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "combisb/budgeted.hpp"
#include "combisb/errors.hpp"

namespace combisb {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Statistics::Statistics(int d, int m) : m_(m), n_(d, 0), sums_(d, 0.0), theta_hat_(d, 0.0) {
  require(d >= 1 && m >= 0, "invalid statistics dimensions");
}

bool Statistics::all_sampled() const {
  for (long n : n_)
    if (n == 0) return false;
  return true;
}

void Statistics::update(const DecisionVector& x, std::span<const double> y) {
  require(static_cast<int>(x.dim()) == dim() && static_cast<int>(y.size()) == dim(),
          "feedback dimension mismatch");
  for (int i = 0; i < dim(); ++i) {
    require(y[i] >= 0.0 && y[i] <= 1.0, "feedback must lie in [0,1]");
    require(x[i] || y[i] == 0.0, "feedback on an unselected item");
  }
  for (int i = 0; i < dim(); ++i) {
    if (!x[i]) continue;
    n_[i] += 1;
    sums_[i] += y[i];
    theta_hat_[i] = sums_[i] / static_cast<double>(n_[i]);
  }
  ++t_;
}

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Escb: return "escb";
    case PolicyKind::Aescb: return "aescb";
    case PolicyKind::Cucb: return "cucb";
    case PolicyKind::Ts: return "ts";
  }
  return "?";
}

PolicyKind policy_kind_from_string(const std::string& name) {
  if (name == "escb") return PolicyKind::Escb;
  if (name == "aescb") return PolicyKind::Aescb;
  if (name == "cucb") return PolicyKind::Cucb;
  if (name == "ts") return PolicyKind::Ts;
  throw ContractViolation("unknown policy '" + name + "'");
}

double confidence_scale(double t, int m, FMode mode) {
  require(t >= 1.0, "round must be >= 1");
  const double log_t = std::max(0.0, std::log(t));
  if (mode == FMode::LogOnly) return log_t;
  if (t < 2.0) return 0.0;
  return log_t + 4.0 * m * std::max(0.0, std::log(log_t));
}

double delta_at(const PolicyConfig& config, long t) {
  if (const auto* known = std::get_if<KnownGapDelta>(&config.delta)) {
    require(known->gap_min > 0.0, "known gap must be positive");
    return known->gap_min / 4.0;
  }
  return 1.0 / std::log(std::numbers::e + static_cast<double>(t));
}

double epsilon_for(const PolicyConfig& config, const DecisionFamily& family) {
  const double eps = config.epsilon.value_or(budgeted_ratio(family));
  require(eps > 0.0 && eps <= 1.0, "epsilon must lie in (0,1]");
  return eps;
}

std::vector<double> sigma_squared(const Statistics& stats, FMode mode, double alpha) {
  require(alpha >= 0.0, "alpha must be nonnegative");
  const double f = confidence_scale(static_cast<double>(stats.round()), stats.m(), mode);
  std::vector<double> s2(stats.dim());
  for (int i = 0; i < stats.dim(); ++i) {
    const long n = stats.counts()[i];
    s2[i] = n >= 1 ? 2.0 * alpha * f / (2.0 * static_cast<double>(n)) : kInf;
  }
  return s2;
}

double escb_index(std::span<const double> theta_hat, std::span<const double> sigma2,
                  const DecisionVector& x) {
  const double bonus = x.dot(sigma2);
  if (std::isinf(bonus)) return kInf;
  return x.dot(theta_hat) + std::sqrt(bonus);
}

Rounded round_and_scale(const Statistics& stats, double delta, int m, FMode mode, double alpha) {
  require(delta > 0.0, "delta must be positive");
  Rounded r;
  r.xi = std::max(1, static_cast<int>(std::ceil(static_cast<double>(m) / delta)));
  const double xi = r.xi;
  const auto s2 = sigma_squared(stats, mode, alpha);
  // Unsampled items get the bonus of a single sample.
  const double cap = alpha * confidence_scale(static_cast<double>(stats.round()), stats.m(), mode);
  r.a.resize(stats.dim());
  r.b.resize(stats.dim());
  for (int i = 0; i < stats.dim(); ++i) {
    const int scaled = static_cast<int>(std::ceil(xi * stats.theta_hat()[i]));
    r.a[i] = std::clamp(scaled, 1, r.xi);
    r.b[i] = xi * xi * (std::isinf(s2[i]) ? cap : s2[i]);
  }
  return r;
}

namespace {

DecisionVector explore_unsampled(const DecisionFamily& family, const Statistics& stats) {
  std::vector<double> w(stats.dim(), 0.0);
  for (int i = 0; i < stats.dim(); ++i) w[i] = stats.counts()[i] == 0 ? 1.0 : 0.0;
  return linear_maximize(family, w);
}

}  // namespace

DecisionVector select_escb(const DecisionFamily& family, const Statistics& stats,
                           const PolicyConfig& config) {
  const auto s2 = sigma_squared(stats, config.f_mode, config.alpha);
  const auto& theta = stats.theta_hat();
  std::vector<DecisionVector> all;
  try {
    all = enumerate(family, config.enumeration_cap);
  } catch (const SetTooLarge& e) {
    throw SetTooLarge(std::string(e.what()) + "; exact ESCB needs enumeration, use AESCB");
  }
  // Decisions covering unsampled items have index +infinity; among them the
  // one covering the most unsampled items wins.
  const DecisionVector* best = nullptr;
  long best_unsampled = -1;
  double best_value = -kInf;
  for (const auto& x : all) {
    long unsampled = 0;
    double mean = 0.0, bonus = 0.0;
    for (int i : x.support()) {
      if (std::isinf(s2[i])) {
        ++unsampled;
      } else {
        mean += theta[i];
        bonus += s2[i];
      }
    }
    const double value = unsampled > 0 ? kInf : mean + std::sqrt(bonus);
    bool better;
    if (best == nullptr) {
      better = true;
    } else if (unsampled != best_unsampled) {
      better = unsampled > best_unsampled;
    } else if (value != best_value) {
      better = value > best_value;
    } else {
      better = support_less(x, *best);
    }
    if (better) {
      best = &x;
      best_unsampled = unsampled;
      best_value = value;
    }
  }
  if (best == nullptr) throw Infeasible("empty decision set");
  return *best;
}

DecisionVector select_aescb(const DecisionFamily& family, const Statistics& stats,
                            const PolicyConfig& config) {
  if (!stats.all_sampled()) return explore_unsampled(family, stats);
  const double delta = delta_at(config, stats.round());
  const double eps = epsilon_for(config, family);
  const int m = stats.m();
  const Rounded r = round_and_scale(stats, delta, m, config.f_mode, config.alpha);
  const int s_max = m * r.xi;
  const BudgetTable table = budgeted_ratio(family) == 1.0
                                ? budgeted_exact_all(family, r.a, r.b, s_max)
                                : budgeted_halfapprox_all(family, r.a, r.b, s_max);
  int best_s = -1;
  double best = -kInf;
  for (int s = 0; s <= s_max; ++s) {
    if (!table.feasible(s)) continue;
    const double score = s + std::sqrt(std::max(0.0, table.value(s))) / eps;
    if (score > best) {
      best = score;
      best_s = s;
    }
  }
  if (best_s < 0) throw Infeasible("no feasible budget");
  return table.decision(best_s);
}

DecisionVector select_cucb(const DecisionFamily& family, const Statistics& stats,
                           const PolicyConfig& config) {
  const double log_t = std::max(0.0, std::log(static_cast<double>(stats.round())));
  std::vector<double> w(stats.dim());
  double magnitude = 1.0;
  for (int i = 0; i < stats.dim(); ++i) {
    const long n = stats.counts()[i];
    if (n == 0) continue;
    w[i] = stats.theta_hat()[i] + config.alpha * log_t / std::sqrt(static_cast<double>(n));
    magnitude += std::abs(w[i]);
  }
  // Larger than any combination of finite indices.
  for (int i = 0; i < stats.dim(); ++i)
    if (stats.counts()[i] == 0) w[i] = magnitude;
  return linear_maximize(family, w);
}

DecisionVector select_ts(const DecisionFamily& family, const Statistics& stats, Rng& rng) {
  std::vector<double> sample(stats.dim());
  for (int i = 0; i < stats.dim(); ++i) {
    const double successes = stats.sums()[i];
    const double failures = static_cast<double>(stats.counts()[i]) - successes;
    std::gamma_distribution<double> gx(1.0 + successes, 1.0);
    std::gamma_distribution<double> gy(1.0 + failures, 1.0);
    const double x = gx(rng), y = gy(rng);
    sample[i] = x + y > 0.0 ? x / (x + y) : 0.5;
  }
  return linear_maximize(family, sample);
}

DecisionVector select(PolicyKind kind, const DecisionFamily& family, const Statistics& stats,
                      const PolicyConfig& config, Rng& rng) {
  switch (kind) {
    case PolicyKind::Escb: return select_escb(family, stats, config);
    case PolicyKind::Aescb: return select_aescb(family, stats, config);
    case PolicyKind::Cucb: return select_cucb(family, stats, config);
    case PolicyKind::Ts: return select_ts(family, stats, rng);
  }
  throw ContractViolation("unknown policy kind");
}

}  // namespace combisb
