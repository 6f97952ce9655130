#include "combisb/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "combisb/errors.hpp"

namespace combisb {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    const int line = node.Mark().line >= 0 ? node.Mark().line + 1 : 0;
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + msg);
  }

  template <class T>
  T scalar(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) fail(node, "'" + key + "' must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, "'" + key + "' has an invalid value '" + node.Scalar() + "'");
    }
  }

  std::vector<double> reals(const YAML::Node& node, const std::string& key) const {
    std::vector<double> out;
    if (node.IsScalar()) {
      out.push_back(scalar<double>(node, key));
    } else if (node.IsSequence()) {
      for (const auto& v : node) out.push_back(scalar<double>(v, key));
    } else {
      fail(node, "'" + key + "' must be a number or a list of numbers");
    }
    return out;
  }

  void only_keys(const YAML::Node& map, const std::set<std::string>& allowed) const {
    for (const auto& kv : map) {
      const auto key = kv.first.Scalar();
      if (!allowed.contains(key)) fail(kv.first, "unknown key '" + key + "'");
    }
  }

 private:
  std::string source_;
};

ExperimentConfig read_experiment(const Reader& r, const YAML::Node& node, std::size_t index) {
  if (!node.IsMap()) r.fail(node, "experiment must be a mapping");
  r.only_keys(node, {"name", "family", "size", "theta", "policies", "alpha", "f_mode", "epsilon",
                     "delta", "horizon", "paths", "base_seed", "timing"});
  ExperimentConfig e;
  e.name = node["name"] ? r.scalar<std::string>(node["name"], "name")
                        : "experiment" + std::to_string(index + 1);
  for (char c : e.name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
      r.fail(node["name"], "name may only contain letters, digits, '_', '-' and '.'");

  if (!node["family"]) r.fail(node, "missing 'family'");
  e.family = r.scalar<std::string>(node["family"], "family");
  if (e.family != "msets" && e.family != "paths" && e.family != "trees" && e.family != "matchings")
    r.fail(node["family"], "unknown family '" + e.family + "'");
  if (!node["size"]) r.fail(node, "missing 'size'");
  e.size = r.scalar<int>(node["size"], "size");

  if (const auto t = node["theta"]) {
    if (!(t.IsScalar() && t.Scalar() == "standard")) e.theta = r.reals(t, "theta");
  }

  if (!node["policies"]) r.fail(node, "missing 'policies'");
  const auto pol = node["policies"];
  if (!pol.IsSequence()) r.fail(pol, "'policies' must be a list");
  for (const auto& p : pol) {
    try {
      e.policies.push_back(policy_kind_from_string(r.scalar<std::string>(p, "policies")));
    } catch (const ContractViolation& ex) {
      r.fail(p, ex.what());
    }
  }
  if (e.policies.empty()) r.fail(pol, "'policies' must not be empty");

  if (const auto a = node["alpha"]) {
    e.alphas = r.reals(a, "alpha");
    if (e.alphas.empty()) r.fail(a, "'alpha' must not be empty");
    for (double v : e.alphas)
      if (!(v >= 0.0)) r.fail(a, "'alpha' must be nonnegative");
  }
  if (const auto f = node["f_mode"]) {
    const auto v = r.scalar<std::string>(f, "f_mode");
    if (v == "log") e.f_mode = FMode::LogOnly;
    else if (v == "theory") e.f_mode = FMode::Theory;
    else r.fail(f, "'f_mode' must be 'log' or 'theory'");
  }
  if (const auto eps = node["epsilon"]) {
    if (!(eps.IsScalar() && eps.Scalar() == "auto")) {
      e.epsilon = r.scalar<double>(eps, "epsilon");
      if (!(*e.epsilon > 0.0 && *e.epsilon <= 1.0)) r.fail(eps, "'epsilon' must lie in (0,1]");
    }
  }
  if (const auto d = node["delta"]) {
    const auto v = d.IsScalar() ? d.Scalar() : std::string();
    if (v == "vanishing") {
      e.delta = std::monostate{};
    } else if (v == "known_gap") {
      e.delta = true;
    } else {
      const double gap = r.scalar<double>(d, "delta");
      if (!(gap > 0.0)) r.fail(d, "'delta' gap must be positive");
      e.delta = gap;
    }
  }
  if (const auto h = node["horizon"]) {
    e.horizon = r.scalar<long>(h, "horizon");
    if (e.horizon < 1) r.fail(h, "'horizon' must be >= 1");
  }
  if (const auto p = node["paths"]) {
    e.paths = r.scalar<int>(p, "paths");
    if (e.paths < 1) r.fail(p, "'paths' must be >= 1");
  }
  if (const auto s = node["base_seed"]) e.base_seed = r.scalar<std::uint64_t>(s, "base_seed");
  if (const auto t = node["timing"]) e.timing = r.scalar<bool>(t, "timing");

  try {
    (void)make_environment(e);
  } catch (const ContractViolation& ex) {
    r.fail(node, std::string("invalid instance: ") + ex.what());
  }
  return e;
}

}  // namespace

Config parse_config(const std::string& text, const std::string& source) {
  const Reader r(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& ex) {
    throw ConfigError(source + ":" + std::to_string(ex.mark.line + 1) + ": " + ex.msg);
  }
  if (!root.IsMap()) throw ConfigError(source + ":1: configuration must be a mapping");
  r.only_keys(root, {"schema", "output", "experiments"});
  Config c;
  if (!root["schema"]) r.fail(root, "missing mandatory 'schema'");
  c.schema = r.scalar<int>(root["schema"], "schema");
  if (c.schema != 1) r.fail(root["schema"], "unsupported schema " + std::to_string(c.schema));
  if (const auto o = root["output"]) c.output = r.scalar<std::string>(o, "output");
  const auto exps = root["experiments"];
  if (!exps) r.fail(root, "missing 'experiments'");
  if (!exps.IsSequence() || exps.size() == 0) r.fail(exps, "'experiments' must be a nonempty list");
  std::set<std::string> names;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    auto e = read_experiment(r, exps[i], i);
    if (!names.insert(e.name).second) r.fail(exps[i], "duplicate experiment name '" + e.name + "'");
    c.experiments.push_back(std::move(e));
  }
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ":0: cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string serialize_config(const Config& config) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "schema" << YAML::Value << config.schema;
  if (config.output) out << YAML::Key << "output" << YAML::Value << *config.output;
  out << YAML::Key << "experiments" << YAML::Value << YAML::BeginSeq;
  for (const auto& e : config.experiments) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << e.name;
    out << YAML::Key << "family" << YAML::Value << e.family;
    out << YAML::Key << "size" << YAML::Value << e.size;
    out << YAML::Key << "theta" << YAML::Value;
    if (e.theta) out << YAML::Flow << *e.theta;
    else out << "standard";
    out << YAML::Key << "policies" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (auto p : e.policies) out << to_string(p);
    out << YAML::EndSeq;
    out << YAML::Key << "alpha" << YAML::Value << YAML::Flow << e.alphas;
    out << YAML::Key << "f_mode" << YAML::Value << (e.f_mode == FMode::LogOnly ? "log" : "theory");
    out << YAML::Key << "epsilon" << YAML::Value;
    if (e.epsilon) out << *e.epsilon;
    else out << "auto";
    out << YAML::Key << "delta" << YAML::Value;
    if (std::holds_alternative<std::monostate>(e.delta)) out << "vanishing";
    else if (std::holds_alternative<bool>(e.delta)) out << "known_gap";
    else out << std::get<double>(e.delta);
    out << YAML::Key << "horizon" << YAML::Value << e.horizon;
    out << YAML::Key << "paths" << YAML::Value << e.paths;
    out << YAML::Key << "base_seed" << YAML::Value << e.base_seed;
    out << YAML::Key << "timing" << YAML::Value << e.timing;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

Environment make_environment(const ExperimentConfig& e) {
  Environment standard = standard_config(e.family, e.size);
  if (!e.theta) return standard;
  return Environment(standard.family(), *e.theta);
}

PolicyConfig make_policy_config(const ExperimentConfig& e, const Environment& env, double alpha) {
  PolicyConfig pc;
  pc.alpha = alpha;
  pc.f_mode = e.f_mode;
  pc.epsilon = e.epsilon;
  if (std::holds_alternative<bool>(e.delta)) {
    const auto gap = env.gap_min();
    if (!gap) throw ContractViolation("known_gap delta needs an enumerable instance with a nonzero gap");
    pc.delta = KnownGapDelta{*gap};
  } else if (const auto* gap = std::get_if<double>(&e.delta)) {
    pc.delta = KnownGapDelta{*gap};
  }
  return pc;
}

}  // namespace combisb
