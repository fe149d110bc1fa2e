#include "stabcheck/report_io.hpp"

#include <json.hpp>
#include <ostream>

namespace stabcheck {

namespace {

using json = nlohmann::ordered_json;

json condition_to_json(const ConditionResult& c) {
  json j;
  j["outcome"] = to_string(c.outcome);
  j["stabilized"] = c.stabilized;
  j["notes"] = c.notes;
  return j;
}

ConditionResult condition_from_json(const std::string& name, const json& j) {
  ConditionResult c;
  c.condition = name;
  const std::string outcome = j.at("outcome").get<std::string>();
  if (outcome == "Violated") {
    c.outcome = Outcome::Violated;
  } else if (outcome == "Satisfied") {
    c.outcome = Outcome::Satisfied;
  } else {
    c.outcome = Outcome::Inconclusive;
  }
  c.stabilized = j.at("stabilized").get<bool>();
  c.notes = j.at("notes").get<std::vector<std::string>>();
  return c;
}

json betti_table(const std::vector<int>& betti) {
  json j = json::object();
  for (std::size_t k = 0; k < betti.size(); ++k) {
    j["H" + std::to_string(k)] = betti[k];
  }
  return j;
}

json torsion_table(const std::vector<std::vector<long long>>& torsion) {
  json j = json::object();
  for (std::size_t k = 0; k < torsion.size(); ++k) {
    j["H" + std::to_string(k)] = torsion[k];
  }
  return j;
}

}  // namespace

std::string report_to_json(const Report& report) {
  json j;
  j["schema_version"] = report.schema_version;
  j["system"] = {{"name", report.system_name},
                 {"n", report.n},
                 {"m", report.m},
                 {"components", report.components}};
  j["params"] = {{"epsilon", report.epsilon},
                 {"resolutions", report.resolutions},
                 {"probe_radius", report.probe_radius},
                 {"samples_per_cube", report.samples_per_cube},
                 {"seed", report.seed}};
  j["homology"] = json::array();
  for (const auto& p : report.profiles) {
    json jp;
    jp["resolution"] = p.resolution;
    jp["top_cubes"] = p.top_cubes;
    jp["total_cells"] = p.total_cells;
    jp["betti"] = betti_table(p.betti);
    jp["torsion"] = torsion_table(p.torsion);
    j["homology"].push_back(std::move(jp));
  }
  json induced;
  induced["probes"] = json::array();
  for (const auto& p : report.induced.probes) {
    json jp;
    jp["name"] = p.name;
    jp["certified_inside"] = p.certified_inside;
    jp["loop_winding"] = p.loop_winding ? json(*p.loop_winding) : json(nullptr);
    jp["image_winding"] = p.image_winding ? json(*p.image_winding) : json(nullptr);
    jp["note"] = p.note;
    induced["probes"].push_back(std::move(jp));
  }
  induced["generators"] = json::array();
  for (const auto& g : report.induced.generators) {
    json jg;
    jg["id"] = g.id;
    jg["map_degree"] = g.map_degree ? json(*g.map_degree) : json(nullptr);
    jg["regular_value"] = g.regular_value;
    jg["support_cells"] = g.support_cells;
    jg["note"] = g.note;
    induced["generators"].push_back(std::move(jg));
  }
  induced["witnessed_generator"] = report.induced.witnessed_generator;
  j["induced_maps"] = std::move(induced);

  json cov;
  cov["rho_img"] = report.coverage.rho_img;
  cov["grid_cells"] = report.coverage.grid_cells;
  cov["ball_cells"] = report.coverage.ball_cells;
  cov["uncovered"] = json::array();
  for (const auto& [res, cells] : report.coverage.uncovered) {
    cov["uncovered"].push_back({{"resolution", res}, {"cells", cells}});
  }
  j["brockett_coverage"] = std::move(cov);

  j["conditions"] = {{"brockett", condition_to_json(report.brockett)},
                     {"coron_classical", condition_to_json(report.coron_classical)},
                     {"coron_strong", condition_to_json(report.coron_strong)}};
  j["verdict"] = report.verdict;
  j["caveats"] = report.caveats;
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(std::string("report JSON parse failure: ") + e.what());
  }
  Report r;
  try {
    r.schema_version = j.at("schema_version").get<int>();
    r.system_name = j.at("system").at("name").get<std::string>();
    r.n = j.at("system").at("n").get<int>();
    r.m = j.at("system").at("m").get<int>();
    r.components = j.at("system").at("components").get<std::vector<std::string>>();
    r.epsilon = j.at("params").at("epsilon").get<double>();
    r.resolutions = j.at("params").at("resolutions").get<std::vector<int>>();
    r.probe_radius = j.at("params").at("probe_radius").get<double>();
    r.samples_per_cube = j.at("params").at("samples_per_cube").get<int>();
    r.seed = j.at("params").at("seed").get<std::uint64_t>();
    for (const auto& jp : j.at("homology")) {
      ResolutionProfile p;
      p.resolution = jp.at("resolution").get<int>();
      p.top_cubes = jp.at("top_cubes").get<long long>();
      p.total_cells = jp.at("total_cells").get<long long>();
      const auto& betti = jp.at("betti");
      p.betti.resize(betti.size());
      for (std::size_t k = 0; k < p.betti.size(); ++k) {
        p.betti[k] = betti.at("H" + std::to_string(k)).get<int>();
      }
      const auto& torsion = jp.at("torsion");
      p.torsion.resize(torsion.size());
      for (std::size_t k = 0; k < p.torsion.size(); ++k) {
        p.torsion[k] =
            torsion.at("H" + std::to_string(k)).get<std::vector<long long>>();
      }
      r.profiles.push_back(std::move(p));
    }
    const auto& induced = j.at("induced_maps");
    for (const auto& jp : induced.at("probes")) {
      ProbeReportEntry p;
      p.name = jp.at("name").get<std::string>();
      p.certified_inside = jp.at("certified_inside").get<bool>();
      if (!jp.at("loop_winding").is_null()) {
        p.loop_winding = jp.at("loop_winding").get<int>();
      }
      if (!jp.at("image_winding").is_null()) {
        p.image_winding = jp.at("image_winding").get<int>();
      }
      p.note = jp.at("note").get<std::string>();
      r.induced.probes.push_back(std::move(p));
    }
    for (const auto& jg : induced.at("generators")) {
      GeneratorReportEntry g;
      g.id = jg.at("id").get<std::string>();
      if (!jg.at("map_degree").is_null()) {
        g.map_degree = jg.at("map_degree").get<int>();
      }
      g.regular_value = jg.at("regular_value").get<std::vector<double>>();
      g.support_cells = jg.at("support_cells").get<long long>();
      g.note = jg.at("note").get<std::string>();
      r.induced.generators.push_back(std::move(g));
    }
    r.induced.witnessed_generator = induced.at("witnessed_generator").get<bool>();

    const auto& cov = j.at("brockett_coverage");
    r.coverage.rho_img = cov.at("rho_img").get<double>();
    r.coverage.grid_cells = cov.at("grid_cells").get<int>();
    r.coverage.ball_cells = cov.at("ball_cells").get<long long>();
    for (const auto& ju : cov.at("uncovered")) {
      r.coverage.uncovered.emplace_back(
          ju.at("resolution").get<int>(),
          ju.at("cells").get<std::vector<std::vector<int>>>());
    }
    r.brockett = condition_from_json("brockett", j.at("conditions").at("brockett"));
    r.coron_classical = condition_from_json(
        "coron_classical", j.at("conditions").at("coron_classical"));
    r.coron_strong =
        condition_from_json("coron_strong", j.at("conditions").at("coron_strong"));
    r.verdict = j.at("verdict").get<std::string>();
    r.caveats = j.at("caveats").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(std::string("report JSON schema mismatch: ") + e.what());
  }
  return r;
}

void write_betti_csv(const Report& report, std::ostream& os) {
  os << "resolution,degree,betti,torsion\n";
  for (const auto& p : report.profiles) {
    for (std::size_t k = 0; k < p.betti.size(); ++k) {
      os << p.resolution << ',' << k << ',' << p.betti[k] << ',';
      const auto& t = p.torsion[k];
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) os << ';';
        os << t[i];
      }
      os << '\n';
    }
  }
}

}  // namespace stabcheck
