// Command-line front end: `stabcheck analyze <config> [options]`.

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "stabcheck/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Topological necessary-condition checker for feedback "
               "stabilizability of control systems xdot = f(x,u)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string resolution_override;
  std::uint64_t seed = 0;
  long long max_cells = 0;
  bool json_only = false;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Run the Brockett / Coron / strong-condition analysis");
  analyze->add_option("config", config_path, "Path to the run config file")
      ->required();
  analyze->add_option("--resolution-override", resolution_override,
                      "Comma-separated resolutions replacing the config list");
  CLI::Option* seed_opt =
      analyze->add_option("--seed", seed, "Override the sampling seed");
  CLI::Option* cells_opt =
      analyze->add_option("--max-cells", max_cells, "Override the cell budget");
  analyze->add_flag("--json-only", json_only,
                    "Print the report JSON to stdout and write no files");

  CLI11_PARSE(app, argc, argv);

  try {
    stabcheck::RunConfig config = stabcheck::load_config(config_path);
    stabcheck::RunOverrides overrides;
    overrides.json_only = json_only;
    if (!resolution_override.empty()) {
      std::vector<int> resolutions;
      std::size_t pos = 0;
      while (pos <= resolution_override.size()) {
        const std::size_t comma = resolution_override.find(',', pos);
        const std::string part = resolution_override.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        resolutions.push_back(std::stoi(part));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      overrides.resolutions = std::move(resolutions);
    }
    if (seed_opt->count() > 0) overrides.seed = seed;
    if (cells_opt->count() > 0) overrides.max_cells = max_cells;
    return stabcheck::run(std::move(config), overrides);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
