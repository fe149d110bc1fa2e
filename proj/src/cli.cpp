#include "stabcheck/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "stabcheck/report_io.hpp"

namespace stabcheck {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

/// Splits a value on top-level commas, honoring double quotes, and strips
/// the quotes from each piece.
std::vector<std::string> split_value(const std::string& value, int line) {
  std::vector<std::string> parts;
  std::string current;
  bool in_quotes = false;
  for (const char c : value) {
    if (c == '"') {
      in_quotes = !in_quotes;
      continue;
    }
    if (c == ',' && !in_quotes) {
      parts.push_back(trim(current));
      current.clear();
      continue;
    }
    current += c;
  }
  if (in_quotes) throw ConfigError("unterminated quote", line);
  parts.push_back(trim(current));
  return parts;
}

long long parse_int(const std::string& value, const std::string& field) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("field '" + field + "' expects an integer, got '" +
                          value + "'");
  }
}

double parse_real(const std::string& value, const std::string& field) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("field '" + field + "' expects a number, got '" +
                          value + "'");
  }
}

int coordinate_index(const std::string& ident, int n, int m,
                     const std::string& field) {
  if (ident.size() >= 2 && (ident[0] == 'x' || ident[0] == 'u')) {
    try {
      const int idx = std::stoi(ident.substr(1));
      if (ident[0] == 'x' && idx >= 1 && idx <= n) return idx - 1;
      if (ident[0] == 'u' && idx >= 1 && idx <= m) return n + idx - 1;
    } catch (const std::exception&) {
    }
  }
  throw ValidationError("field '" + field + "': '" + ident +
                        "' is not a coordinate within x1..x" + std::to_string(n) +
                        ", u1..u" + std::to_string(m));
}

struct RawEntry {
  std::string value;
  int line = 0;
};

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);

  std::map<std::string, std::map<std::string, RawEntry>> sections;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("malformed section header", lineno);
      section = trim(t.substr(1, t.size() - 2));
      if (section != "system" && section != "analysis" && section != "output") {
        throw ConfigError("unknown section [" + section + "]", lineno);
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", lineno);
    if (section.empty()) throw ConfigError("key outside any section", lineno);
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError("empty key", lineno);
    if (sections[section].count(key)) {
      throw ConfigError("duplicate key '" + key + "'", lineno);
    }
    sections[section][key] = RawEntry{trim(t.substr(eq + 1)), lineno};
  }

  RunConfig config;
  auto& sys_keys = sections["system"];
  auto take = [](std::map<std::string, RawEntry>& keys, const std::string& key)
      -> std::optional<RawEntry> {
    const auto it = keys.find(key);
    if (it == keys.end()) return std::nullopt;
    RawEntry e = it->second;
    keys.erase(it);
    return e;
  };
  auto unquote = [&](const RawEntry& e) {
    const auto parts = split_value(e.value, e.line);
    return parts.size() == 1 ? parts[0] : e.value;
  };

  const auto name = take(sys_keys, "name");
  config.system.name = name ? unquote(*name) : "unnamed";
  const auto n_entry = take(sys_keys, "n");
  if (!n_entry) throw ValidationError("field 'n' is required in [system]");
  config.system.n = static_cast<int>(parse_int(n_entry->value, "n"));
  const auto m_entry = take(sys_keys, "m");
  if (!m_entry) throw ValidationError("field 'm' is required in [system]");
  config.system.m = static_cast<int>(parse_int(m_entry->value, "m"));
  if (config.system.n < 1 || config.system.m < 0) {
    throw ValidationError("field 'n' must be >= 1 and 'm' >= 0");
  }
  for (int i = 1; i <= config.system.n; ++i) {
    const std::string key = "f" + std::to_string(i);
    const auto entry = take(sys_keys, key);
    if (!entry) throw ValidationError("field '" + key + "' is required in [system]");
    const std::string text = unquote(*entry);
    try {
      config.system.components.push_back(
          parse(text, config.system.n, config.system.m));
    } catch (const Error& e) {
      throw ValidationError("field '" + key + "': " + e.what());
    }
  }
  if (!sys_keys.empty()) {
    throw ValidationError("unknown field '" + sys_keys.begin()->first +
                          "' in [system]");
  }

  auto& ana_keys = sections["analysis"];
  if (const auto e = take(ana_keys, "epsilon")) {
    config.params.epsilon = parse_real(e->value, "epsilon");
  }
  if (const auto e = take(ana_keys, "resolutions")) {
    config.params.resolutions.clear();
    for (const auto& part : split_value(e->value, e->line)) {
      config.params.resolutions.push_back(
          static_cast<int>(parse_int(part, "resolutions")));
    }
  }
  if (const auto e = take(ana_keys, "probe_radius")) {
    config.params.probe_radius = parse_real(e->value, "probe_radius");
  }
  if (const auto e = take(ana_keys, "samples_per_cube")) {
    config.params.samples_per_cube =
        static_cast<int>(parse_int(e->value, "samples_per_cube"));
  }
  if (const auto e = take(ana_keys, "probe_samples")) {
    config.params.probe_samples =
        static_cast<int>(parse_int(e->value, "probe_samples"));
  }
  if (const auto e = take(ana_keys, "image_grid_cells")) {
    config.params.image_grid_cells =
        static_cast<int>(parse_int(e->value, "image_grid_cells"));
  }
  if (const auto e = take(ana_keys, "seed")) {
    config.params.seed = static_cast<std::uint64_t>(parse_int(e->value, "seed"));
  }
  if (const auto e = take(ana_keys, "max_cells")) {
    config.params.max_cells = parse_int(e->value, "max_cells");
  }
  // Probes: probeK = "<expr>", ... (n+m expressions of t), with an optional
  // probeK_projection = xi, xj line.
  for (int k = 1;; ++k) {
    const std::string key = "probe" + std::to_string(k);
    const auto entry = take(ana_keys, key);
    if (!entry) break;
    ProbeLoop probe;
    probe.name = key;
    probe.samples = config.params.probe_samples;
    const auto parts = split_value(entry->value, entry->line);
    if (static_cast<int>(parts.size()) != config.system.n + config.system.m) {
      throw ValidationError("field '" + key + "' expects " +
                            std::to_string(config.system.n + config.system.m) +
                            " comma-separated expressions of t");
    }
    for (const auto& part : parts) {
      try {
        probe.components.push_back(
            parse(part, config.system.n, config.system.m, /*allow_time=*/true));
      } catch (const Error& e) {
        throw ValidationError("field '" + key + "': " + e.what());
      }
    }
    if (const auto proj = take(ana_keys, key + "_projection")) {
      const auto idents = split_value(proj->value, proj->line);
      if (idents.size() != 2) {
        throw ValidationError("field '" + key +
                              "_projection' expects two coordinates");
      }
      probe.projection = {
          coordinate_index(idents[0], config.system.n, config.system.m,
                           key + "_projection"),
          coordinate_index(idents[1], config.system.n, config.system.m,
                           key + "_projection")};
    }
    config.probes.push_back(std::move(probe));
  }
  if (!ana_keys.empty()) {
    throw ValidationError("unknown field '" + ana_keys.begin()->first +
                          "' in [analysis]");
  }

  auto& out_keys = sections["output"];
  if (const auto e = take(out_keys, "report")) config.output.report_path = unquote(*e);
  if (const auto e = take(out_keys, "betti_csv")) config.output.csv_path = unquote(*e);
  if (const auto e = take(out_keys, "verbosity")) {
    config.output.verbosity = static_cast<int>(parse_int(e->value, "verbosity"));
  }
  if (!out_keys.empty()) {
    throw ValidationError("unknown field '" + out_keys.begin()->first +
                          "' in [output]");
  }

  if (config.output.report_path.empty()) {
    config.output.report_path = config.system.name + "_report.json";
  }
  if (config.output.csv_path.empty()) {
    config.output.csv_path = config.system.name + "_betti.csv";
  }

  config.system.validate();
  config.params.validate();
  if (config.params.resolutions.size() < 2) {
    throw ValidationError("field 'resolutions' needs at least 2 entries for "
                          "stabilization");
  }
  return config;
}

namespace {

std::string resolve_output_path(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  if (const char* dir = std::getenv("STABCHECK_OUTPUT_DIR")) {
    std::string base(dir);
    if (!base.empty()) {
      if (base.back() != '/') base += '/';
      return base + path;
    }
  }
  return path;
}

}  // namespace

int run(RunConfig config, const RunOverrides& overrides) {
  try {
    if (overrides.resolutions) config.params.resolutions = *overrides.resolutions;
    if (overrides.seed) config.params.seed = *overrides.seed;
    if (overrides.max_cells) config.params.max_cells = *overrides.max_cells;
    config.params.validate();

    const Report report = analyze(config.system, config.params, config.probes);
    const std::string json = report_to_json(report);

    if (overrides.json_only) {
      std::cout << json;
    } else {
      const std::string report_path = resolve_output_path(config.output.report_path);
      std::ofstream out(report_path);
      if (!out) throw Error("cannot write report to " + report_path);
      out << json;
      const std::string csv_path = resolve_output_path(config.output.csv_path);
      std::ofstream csv(csv_path);
      if (!csv) throw Error("cannot write CSV to " + csv_path);
      write_betti_csv(report, csv);
      if (config.output.verbosity >= 1) {
        std::cout << "system: " << report.system_name << "\n";
        for (const ConditionResult* c : {&report.brockett, &report.coron_classical,
                                         &report.coron_strong}) {
          std::cout << "  " << c->condition << ": " << to_string(c->outcome)
                    << (c->stabilized ? " (stabilized)" : "") << "\n";
        }
        std::cout << "verdict: " << report.verdict << "\n";
        std::cout << "report: " << report_path << "\n";
      }
    }
    return report.verdict == "NotStabilizable" ? 3 : 0;
  } catch (const CapacityError& e) {
    std::cerr << "aborted by resource limits: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace stabcheck
