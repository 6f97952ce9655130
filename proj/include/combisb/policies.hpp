#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "combisb/decision.hpp"
#include "combisb/family.hpp"
#include "combisb/rng.hpp"

namespace combisb {

// Per-item sample counts and feedback sums observed so far.
class Statistics {
 public:
  Statistics(int d, int m);

  int dim() const { return static_cast<int>(n_.size()); }
  int m() const { return m_; }
  long round() const { return t_; }  // current round t, starting at 1
  const std::vector<long>& counts() const { return n_; }
  const std::vector<double>& sums() const { return sums_; }
  const std::vector<double>& theta_hat() const { return theta_hat_; }
  bool all_sampled() const;

  // Requires y_i = 0 off the support of x and y in [0,1]^d.
  void update(const DecisionVector& x, std::span<const double> y);

 private:
  long t_ = 1;
  int m_ = 0;
  std::vector<long> n_;
  std::vector<double> sums_;
  std::vector<double> theta_hat_;
};

enum class FMode { Theory, LogOnly };

struct VanishingDelta {};  // delta_t = 1 / ln(e + t)
struct KnownGapDelta {
  double gap_min = 0.0;  // delta_t = gap_min / 4
};

struct PolicyConfig {
  double alpha = 0.5;
  FMode f_mode = FMode::LogOnly;
  // Ratio used in the budget sweep. Empty: 1 for exact solvers, 1/2 otherwise.
  std::optional<double> epsilon;
  std::variant<VanishingDelta, KnownGapDelta> delta = VanishingDelta{};
  std::size_t enumeration_cap = kDefaultEnumerationCap;
};

enum class PolicyKind { Escb, Aescb, Cucb, Ts };

std::string to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(const std::string& name);

// f(t): ln t + 4 m ln ln t (Theory, ln ln t clamped at 0) or ln t (LogOnly).
double confidence_scale(double t, int m, FMode mode);

double delta_at(const PolicyConfig& config, long t);
double epsilon_for(const PolicyConfig& config, const DecisionFamily& family);

// sigma^2_i = 2 alpha f(t) / (2 n_i); +infinity for unsampled items.
std::vector<double> sigma_squared(const Statistics& stats, FMode mode, double alpha);

// theta_hat^T x + sqrt(sigma2^T x); +infinity if x covers an unsampled item.
double escb_index(std::span<const double> theta_hat, std::span<const double> sigma2,
                  const DecisionVector& x);

struct Rounded {
  std::vector<int> a;
  std::vector<double> b;
  int xi = 1;
};

// xi = ceil(m / delta), a_i = clamp(ceil(xi theta_hat_i), 1, xi), b_i = xi^2 sigma2_i.
Rounded round_and_scale(const Statistics& stats, double delta, int m, FMode mode, double alpha);

DecisionVector select_escb(const DecisionFamily& family, const Statistics& stats,
                           const PolicyConfig& config);
DecisionVector select_aescb(const DecisionFamily& family, const Statistics& stats,
                            const PolicyConfig& config);
DecisionVector select_cucb(const DecisionFamily& family, const Statistics& stats,
                           const PolicyConfig& config);
DecisionVector select_ts(const DecisionFamily& family, const Statistics& stats, Rng& rng);

DecisionVector select(PolicyKind kind, const DecisionFamily& family, const Statistics& stats,
                      const PolicyConfig& config, Rng& rng);

}  // namespace combisb
