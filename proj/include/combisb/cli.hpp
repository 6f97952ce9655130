#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "combisb/selftest.hpp"

namespace combisb {

// Exit codes: 0 success, 1 runtime or selftest failure, 2 usage or configuration error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int cmd_run(const std::string& config_path, const std::optional<std::string>& out_dir,
            unsigned threads, std::ostream& out, std::ostream& err);
int cmd_selftest(const std::optional<std::string>& suite, std::ostream& out, std::ostream& err,
                 const Solvers& solvers = {});

// COMBISB_THREADS, when set, overrides the flag value.
unsigned resolve_threads(int flag_value);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace combisb
