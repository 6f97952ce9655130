#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "combisb/policies.hpp"
#include "combisb/sim.hpp"

namespace combisb {

// Invalid configuration; the message carries "<source>:<line>: ".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string name;
  std::string family;  // msets | paths | trees | matchings
  int size = 0;
  std::optional<std::vector<double>> theta;  // empty: the standard instance
  std::vector<PolicyKind> policies;
  std::vector<double> alphas{0.5};
  FMode f_mode = FMode::LogOnly;
  std::optional<double> epsilon;
  // monostate: vanishing; true: Delta_min computed from the instance; double: given Delta_min.
  std::variant<std::monostate, bool, double> delta;
  long horizon = 1000;
  int paths = 10;
  std::uint64_t base_seed = 1;
  bool timing = true;

  bool operator==(const ExperimentConfig&) const = default;
};

struct Config {
  int schema = 1;
  std::optional<std::string> output;
  std::vector<ExperimentConfig> experiments;

  bool operator==(const Config&) const = default;
};

Config parse_config(const std::string& text, const std::string& source = "<config>");
Config load_config(const std::string& path);
std::string serialize_config(const Config& config);

Environment make_environment(const ExperimentConfig& e);
PolicyConfig make_policy_config(const ExperimentConfig& e, const Environment& env, double alpha);

}  // namespace combisb
