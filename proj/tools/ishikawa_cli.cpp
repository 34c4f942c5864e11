#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ishikawa/commands.hpp"

namespace {

using namespace ishikawa;

using Command = int (*)(const ExperimentConfig&, const CommandOptions&, std::ostream&, std::ostream&);

struct Sub {
  const char* name;
  const char* help;
  Command run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ishikawa iteration in uniformly convex geodesic spaces: certified rates and their verification"};
  app.require_subcommand(1);

  std::string configPath;
  std::uint64_t seed = 0;
  std::uint64_t maxSteps = 0;
  std::string outDir = "out";
  bool json = false;

  const Sub subs[] = {
      {"verify-space", "check the metric and convexity axioms of the configured space and map", cmdVerifySpace},
      {"rate", "print Phi, P, gamma0 and Delta as JSON for every eps of the grid", cmdRate},
      {"run", "simulate, audit the trajectory and the rates, write trajectory.csv", cmdRun},
      {"sweep", "tabulate the rates against simulation over the eps grid, write sweep.csv", cmdSweep},
  };
  std::vector<CLI::App*> apps;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", configPath, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--max-steps", maxSteps, "override the simulation step cap");
    sub->add_option("--out", outDir, "output directory for CSV and JSON artifacts");
    sub->add_flag("--json", json, "machine-readable output");
    apps.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CommandOptions options;
  options.outDir = outDir;
  options.json = json;
  for (std::size_t i = 0; i < apps.size(); ++i) {
    if (!apps[i]->parsed()) continue;
    if (apps[i]->count("--seed")) options.seed = seed;
    if (apps[i]->count("--max-steps")) options.maxSteps = maxSteps;
    try {
      const ExperimentConfig config = loadConfigFile(configPath);
      return subs[i].run(config, options, std::cout, std::cerr);
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitCheckFailed;
    }
  }
  return kExitUsage;
}
