#ifndef STABCHECK_CHECKER_HPP
#define STABCHECK_CHECKER_HPP

#include <optional>
#include <string>
#include <vector>

#include "stabcheck/degree.hpp"
#include "stabcheck/homology.hpp"

namespace stabcheck {

enum class Outcome { Violated, Satisfied, Inconclusive };

const char* to_string(Outcome o);

/// Result of one necessary-condition test. Violated verdicts require the
/// supporting quantity to have stabilized (equal on the two finest
/// resolutions / sampling densities); Satisfied verdicts rest on a certified
/// witness and are sound at any resolution.
struct ConditionResult {
  std::string condition;  // "brockett" | "coron_classical" | "coron_strong"
  Outcome outcome = Outcome::Inconclusive;
  bool stabilized = false;
  std::vector<std::string> notes;
};

/// Image-coverage evidence for the openness check.
struct BrockettCoverage {
  double rho_img = 0.0;        // radius of the image ball actually tested
  int grid_cells = 0;          // image grid cells per axis
  long long ball_cells = 0;    // cells fully inside the ball
  // per sampled resolution: uncovered in-ball cell multi-indices
  std::vector<std::pair<int, std::vector<std::vector<int>>>> uncovered;
};

struct ProbeReportEntry {
  std::string name;
  bool certified_inside = false;  // all samples in the finest certified complex
  std::optional<int> loop_winding;       // winding of the projected loop
  std::optional<int> image_winding;      // winding of projected f(loop), n = 2
  std::string note;
};

struct GeneratorReportEntry {
  std::string id;  // e.g. "H2[0]" or "H2[combined]"
  std::optional<int> map_degree;
  std::vector<double> regular_value;
  long long support_cells = 0;
  std::string note;
};

/// Degrees of f-induced maps on probe loops and top-homology generators.
struct InducedMapReport {
  std::vector<ProbeReportEntry> probes;
  std::vector<GeneratorReportEntry> generators;
  bool witnessed_generator = false;  // some recorded |degree| == 1
};

struct ResolutionProfile {
  int resolution = 0;
  long long top_cubes = 0;
  long long total_cells = 0;
  std::vector<int> betti;
  std::vector<std::vector<long long>> torsion;
};

/// Full evidence-bearing verdict. NoObstructionFound never claims
/// stabilizability: the conditions checked are necessary, not sufficient.
struct Report {
  int schema_version = 1;
  std::string system_name;
  int n = 0;
  int m = 0;
  std::vector<std::string> components;
  double epsilon = 0.0;
  std::vector<int> resolutions;
  double probe_radius = 0.0;
  int samples_per_cube = 0;
  std::uint64_t seed = 0;
  std::vector<ResolutionProfile> profiles;
  InducedMapReport induced;
  BrockettCoverage coverage;
  ConditionResult brockett;
  ConditionResult coron_classical;
  ConditionResult coron_strong;
  std::string verdict;  // "NotStabilizable" | "NoObstructionFound"
  std::vector<std::string> caveats;
};

/// Openness test: samples f over the box at every configured resolution and
/// looks for image-grid cells inside the ball of radius rho_img (the 0.25
/// quantile of sampled |f|) that no sample covers. Violated requires the same
/// holes at the two finest densities.
ConditionResult check_brockett(const VectorFieldSystem& sys,
                               const AnalysisParams& params,
                               BrockettCoverage* coverage_out = nullptr);

/// Top-homology surjectivity test: Satisfied on a certified witness of
/// |degree| = 1 (probe loop for n = 2, generator or unimodular generator
/// combination otherwise); Violated when betti_{n-1} stabilizes at 0.
ConditionResult check_coron_classical(const VectorFieldSystem& sys,
                                      const AnalysisParams& params,
                                      const std::vector<CubicalComplex>& complexes,
                                      const std::vector<HomologyProfile>& profiles,
                                      const InducedMapReport& induced);

/// Cohomology-sphere test plus induced-map witness in top degree. The sphere
/// profile is checked first; when it fails on stabilized data the condition
/// is Violated and the induced-map test is moot.
ConditionResult check_strong(const VectorFieldSystem& sys,
                             const AnalysisParams& params,
                             const std::vector<CubicalComplex>& complexes,
                             const std::vector<HomologyProfile>& profiles,
                             const InducedMapReport& induced);

/// Runs the full pipeline: certified complexes at every resolution, homology
/// profiles, probe and generator degrees, then the three checks in the order
/// Brockett, Coron classical, Coron strong (all always evaluated).
/// Deterministic for fixed seeds.
Report analyze(const VectorFieldSystem& sys, const AnalysisParams& params,
               const std::vector<ProbeLoop>& user_probes = {});

namespace detail {

/// Bezout coefficients c with sum c_i * degrees_i = gcd(degrees). Used to
/// assemble an explicit unit-degree witness class when no single generator
/// maps with degree +-1 but the degrees are jointly coprime.
std::vector<long long> bezout_coefficients(const std::vector<long long>& degrees);

}  // namespace detail

}  // namespace stabcheck

#endif  // STABCHECK_CHECKER_HPP
