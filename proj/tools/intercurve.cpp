// Command-line front end for the intermediate-curvature toolkit.
//
//   intercurve <command> --config <path> [--seed N] [--lambda ...]
//              [--epsilon ...] [--out <path>]
//
// Exit codes: 0 all checks passed, 1 usage/config error, 2 hypothesis
// violated (flagged run), 3 check failed.

#include "intercurve/run.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  CLI::App app{"numerical checks for m-intermediate curvature gluing and doubling"};
  app.set_version_flag("--version", std::string("intercurve ") + intercurve::kVersion);

  std::string command, config_path, out_path;
  std::uint64_t seed = 0;
  bool have_seed = false;
  std::vector<double> lambdas, epsilons;

  std::string commands_help;
  for (const auto& c : intercurve::command_names())
    commands_help += (commands_help.empty() ? "" : ", ") + c;
  app.add_option("command", command, "one of: " + commands_help)->required();
  app.add_option("--config", config_path, "configuration file")->required();
  app.add_option("--seed", seed, "override the config seed")->each([&](const std::string&) {
    have_seed = true;
  });
  app.add_option("--lambda", lambdas, "override the lambda grid")->delimiter(',');
  app.add_option("--epsilon", epsilons, "override the epsilon list")->delimiter(',');
  app.add_option("--out", out_path, "write the report to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // usage problems map to exit 1
  }

  intercurve::RunOverrides over;
  if (have_seed) over.seed = seed;
  if (!lambdas.empty()) over.lambdas = lambdas;
  if (!epsilons.empty()) over.epsilons = epsilons;
  if (!out_path.empty()) over.out = out_path;

  const intercurve::RunResult result = intercurve::run_config_file(command, config_path, over);
  std::fputs(result.report.c_str(), stdout);
  return result.exit_code;
}
