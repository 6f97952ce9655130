#include "combisb/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>

#include "combisb/config.hpp"
#include "combisb/errors.hpp"

namespace combisb {

namespace fs = std::filesystem;

namespace {

std::string short_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_file(const fs::path& path, const std::string& what,
                const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + what + " '" + path.string() + "'");
  body(f);
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

unsigned resolve_threads(int flag_value) {
  if (const char* env = std::getenv("COMBISB_THREADS"); env && *env) {
    int v = -1;
    const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), v);
    if (ec != std::errc() || *ptr != '\0' || v < 0)
      throw ContractViolation(std::string("COMBISB_THREADS must be a nonnegative integer, got '") + env + "'");
    return static_cast<unsigned>(v);
  }
  if (flag_value < 0) throw ContractViolation("--threads must be >= 0");
  return static_cast<unsigned>(flag_value);
}

int cmd_run(const std::string& config_path, const std::optional<std::string>& out_dir,
            unsigned threads, std::ostream& out, std::ostream& err) {
  Config config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    const fs::path root = out_dir.value_or(config.output.value_or("results"));
    fs::create_directories(root);
    std::vector<std::string> summary;
    for (const auto& e : config.experiments) {
      const Environment env = make_environment(e);
      const fs::path dir = root / e.name;
      fs::create_directories(dir);
      for (PolicyKind kind : e.policies) {
        for (double alpha : e.alphas) {
          const PolicyConfig pc = make_policy_config(e, env, alpha);
          auto traces = run(env, kind, pc, e.horizon, e.paths, e.base_seed, threads);
          if (!e.timing)
            for (auto& tr : traces) std::fill(tr.select_seconds.begin(), tr.select_seconds.end(), 0.0);
          const std::string file = to_string(kind) + "_alpha" + short_number(alpha) + ".csv";
          write_file(dir / file, "trace CSV", [&](std::ostream& f) { write_traces_csv(f, traces, e.timing); });

          MeanCi regret;
          if (traces.size() >= 2) {
            const long rounds[] = {e.horizon};
            regret = aggregate(traces, rounds).front().regret;
          } else {
            regret = {traces.front().cum_regret.back(), 0.0};
          }
          const MeanCi timing = aggregate_select_seconds(traces);
          summary.push_back(e.name + ',' + to_string(kind) + ',' + short_number(alpha) + ',' +
                            std::to_string(e.horizon) + ',' + format_number(regret.mean) + ',' +
                            format_number(regret.halfwidth) + ',' + format_number(timing.mean) + ',' +
                            format_number(timing.halfwidth));
          out << e.name << ' ' << to_string(kind) << " alpha=" << short_number(alpha)
              << ": R(T) = " << regret.mean << " +- " << regret.halfwidth << '\n';
        }
      }
    }
    write_file(root / "summary.csv", "summary", [&](std::ostream& f) {
      f << "experiment,policy,alpha,T,mean_regret,ci_halfwidth,mean_select_seconds,ci_select_seconds\n";
      for (const auto& row : summary) f << row << '\n';
    });
    out << "wrote " << (root / "summary.csv").string() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_selftest(const std::optional<std::string>& suite, std::ostream& out, std::ostream& err,
                 const Solvers& solvers) {
  std::vector<std::string> names = selftest_suites();
  if (suite) {
    if (std::find(names.begin(), names.end(), *suite) == names.end()) {
      err << "error: unknown suite '" << *suite << "'\n";
      return kExitUsage;
    }
    names = {*suite};
  }
  bool all = true;
  for (const auto& name : names) {
    const SuiteResult r = run_suite(name, solvers);
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.checks << " checks, " << r.seconds
        << " s)";
    if (!r.passed) out << ": " << r.first_failure;
    out << '\n';
    all = all && r.passed;
  }
  return all ? kExitOk : kExitFailure;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Combinatorial semi-bandit experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  int threads = 0;
  auto* run_cmd = app.add_subcommand("run", "Run the experiments declared in a config file");
  run_cmd->add_option("config", config_path, "YAML experiment config")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (overrides the config)");
  run_cmd->add_option("--threads", threads, "Worker threads, 0 = one per core");

  std::optional<std::string> suite;
  auto* self_cmd = app.add_subcommand("selftest", "Check the solvers against brute-force oracles");
  self_cmd->add_option("--suite", suite, "Run a single suite")
      ->check(CLI::IsMember(selftest_suites()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    if (*run_cmd) return cmd_run(config_path, out_dir, resolve_threads(threads), out, err);
    return cmd_selftest(suite, out, err);
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace combisb
