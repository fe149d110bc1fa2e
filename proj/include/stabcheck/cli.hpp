#ifndef STABCHECK_CLI_HPP
#define STABCHECK_CLI_HPP

#include <optional>
#include <string>
#include <vector>

#include "stabcheck/checker.hpp"

namespace stabcheck {

struct OutputConfig {
  std::string report_path;  // defaults to <name>_report.json
  std::string csv_path;     // defaults to <name>_betti.csv
  int verbosity = 1;
};

/// One analysis run as described by a config file.
struct RunConfig {
  VectorFieldSystem system;
  AnalysisParams params;
  std::vector<ProbeLoop> probes;
  OutputConfig output;
};

/// Loads a flat INI-style config: [system] / [analysis] / [output] sections
/// with key = value lines, expression values quoted. Defaults are filled
/// (epsilon = 0.5, resolutions = 8,16, probe_radius = epsilon/4); the system
/// is validated (including f(0,0) = 0) at load time.
///
/// Throws ConfigError with the line number on parse failures and
/// ValidationError naming the offending field.
RunConfig load_config(const std::string& path);

struct RunOverrides {
  std::optional<std::vector<int>> resolutions;
  std::optional<std::uint64_t> seed;
  std::optional<long long> max_cells;
  bool json_only = false;  // print the report JSON to stdout, write no files
};

/// Runs the analysis and writes the report JSON and betti CSV. Output paths
/// resolve relative to $STABCHECK_OUTPUT_DIR when that is set.
///
/// Exit codes: 0 NoObstructionFound, 3 NotStabilizable, 2 aborted by
/// resource limits, 1 any other error.
int run(RunConfig config, const RunOverrides& overrides = {});

}  // namespace stabcheck

#endif  // STABCHECK_CLI_HPP
