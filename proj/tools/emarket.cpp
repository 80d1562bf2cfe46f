// Command-line front end: solve, sweep, simulate and check scenario files.
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "emarket/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium solver for a retail market with virtual and physical shops"};
  app.require_subcommand(1);

  emarket::CommandOptions opts;
  std::string scenario;
  std::string out_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("scenario", scenario, "Scenario file (JSON)")->required();
    cmd->add_option("--out", out_path, "Write output here instead of stdout");
    cmd->add_flag("--override-feasibility", opts.override_feasibility,
                  "Solve configurations that violate the hard restrictions");
    cmd->add_flag("--literal-s5-rule", opts.literal_s5_rule,
                  "Price the costlier old-firm virtual shop at min{c_vo, p̂_vo}");
  };

  auto* solve = app.add_subcommand("solve", "Full equilibrium report");
  auto* sweep = app.add_subcommand("sweep", "CSV regime map over the sweep grid");
  auto* simulate = app.add_subcommand("simulate", "Agent-level search simulation");
  auto* check = app.add_subcommand("check", "Feasibility report only");
  for (auto* cmd : {solve, sweep, simulate, check}) add_common(cmd);
  simulate->add_option("--seed", opts.seed, "RNG seed");
  simulate->add_option("--agents", opts.agents, "Number of simulated consumers")
      ->check(CLI::PositiveNumber);
  for (auto* cmd : {sweep, simulate}) {
    cmd->add_option("--workers", opts.workers, "Worker threads (0 = all cores)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : emarket::kExitParse;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return emarket::kExitParse;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;

  if (*solve) return emarket::run_solve(scenario, opts, out, std::cerr);
  if (*sweep) return emarket::run_sweep(scenario, opts, out, std::cerr);
  if (*simulate) return emarket::run_simulate(scenario, opts, out, std::cerr);
  return emarket::run_check(scenario, opts, out, std::cerr);
}
