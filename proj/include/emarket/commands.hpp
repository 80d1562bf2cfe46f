#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "emarket/opening.hpp"
#include "emarket/scenario.hpp"

namespace emarket {

enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 1,
  kExitInfeasible = 2,
  kExitNonConvergence = 3,
  kExitModel = 4,
};

struct CommandOptions {
  bool override_feasibility = false;
  bool literal_s5_rule = false;
  std::uint64_t seed = 1;
  std::int64_t agents = 100'000;
  /// 0 = hardware concurrency. Never changes the output.
  unsigned workers = 0;
};

/// Exit code for a model error.
int exit_code_for(ErrorKind kind);

/// Full structured report of one scenario.
nlohmann::json solve_report(const Scenario& sc, const CommandOptions& opts);

/// Simulation report for every opening profile.
nlohmann::json simulate_report(const Scenario& sc, const CommandOptions& opts);

inline constexpr const char* kSweepHeader =
    "lambda,delta_c,K,r_p,regime_10,regime_11,p_p_10,p_p_11,p_os,p_ms,"
    "a_star_n,a_star_o,Vn_10,Vo_11,delta_o_11,status";

/// One CSV row (no newline) for a single configuration.
std::string sweep_row(const MarketConfig& cfg, GoodsMode mode,
                      const CommandOptions& opts);

/// Each command reads the scenario at `path`, writes its output to `out`
/// and diagnostics to `err`, and returns the process exit code.
int run_solve(const std::filesystem::path& path, const CommandOptions& opts,
              std::ostream& out, std::ostream& err);
int run_sweep(const std::filesystem::path& path, const CommandOptions& opts,
              std::ostream& out, std::ostream& err);
int run_simulate(const std::filesystem::path& path, const CommandOptions& opts,
                 std::ostream& out, std::ostream& err);
int run_check(const std::filesystem::path& path, const CommandOptions& opts,
              std::ostream& out, std::ostream& err);

}  // namespace emarket
