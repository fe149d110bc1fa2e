#include "stabcheck/checker.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace stabcheck {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Violated:
      return "Violated";
    case Outcome::Satisfied:
      return "Satisfied";
    case Outcome::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

// ---------------------------------------------------------------------------
// Brockett openness check
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<int>> coverage_holes(const Eigen::MatrixXd& image,
                                             double rho, int grid_cells,
                                             const std::vector<std::vector<int>>& ball_cells,
                                             int n) {
  const double w = 2.0 * rho / grid_cells;
  std::set<long long> covered;
  for (Eigen::Index c = 0; c < image.cols(); ++c) {
    long long lin = 0;
    bool inside = true;
    for (int a = 0; a < n && inside; ++a) {
      const int idx = static_cast<int>(std::floor((image(a, c) + rho) / w));
      if (idx < 0 || idx >= grid_cells) inside = false;
      lin = lin * grid_cells + idx;
    }
    if (inside) covered.insert(lin);
  }
  std::vector<std::vector<int>> holes;
  for (const auto& cell : ball_cells) {
    long long lin = 0;
    for (int a = 0; a < n; ++a) lin = lin * grid_cells + cell[a];
    if (!covered.count(lin)) holes.push_back(cell);
  }
  return holes;
}

}  // namespace

ConditionResult check_brockett(const VectorFieldSystem& sys,
                               const AnalysisParams& params,
                               BrockettCoverage* coverage_out) {
  ConditionResult result;
  result.condition = "brockett";

  std::vector<Eigen::MatrixXd> images;
  images.reserve(params.resolutions.size());
  for (const int r : params.resolutions) {
    images.push_back(sample_image(sys, params, r, params.samples_per_cube));
  }

  // rho_img: the 0.25 quantile of |f| over the finest sampling.
  const Eigen::MatrixXd& finest = images.back();
  std::vector<double> norms(finest.cols());
  for (Eigen::Index c = 0; c < finest.cols(); ++c) norms[c] = finest.col(c).norm();
  std::sort(norms.begin(), norms.end());
  double rho = norms[static_cast<std::size_t>(0.25 * (norms.size() - 1))];
  if (rho <= 0.0) {
    const auto it = std::upper_bound(norms.begin(), norms.end(), 0.0);
    if (it == norms.end()) {
      result.outcome = Outcome::Inconclusive;
      result.notes.push_back("image of f is identically zero at sampling scale");
      return result;
    }
    rho = *it;
  }

  const int n = sys.n;
  const int g = params.image_grid_cells;
  const double w = 2.0 * rho / g;
  // Image cells lying entirely inside the closed ball |y| <= rho.
  std::vector<std::vector<int>> ball_cells;
  std::vector<int> idx(n, 0);
  while (true) {
    double far2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const double lo = -rho + idx[a] * w;
      const double hi = lo + w;
      const double far = std::max(std::abs(lo), std::abs(hi));
      far2 += far * far;
    }
    if (far2 <= rho * rho) ball_cells.push_back(idx);
    int a = 0;
    for (; a < n; ++a) {
      if (++idx[a] < g) break;
      idx[a] = 0;
    }
    if (a == n) break;
  }

  BrockettCoverage cov;
  cov.rho_img = rho;
  cov.grid_cells = g;
  cov.ball_cells = static_cast<long long>(ball_cells.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    cov.uncovered.emplace_back(params.resolutions[i],
                               coverage_holes(images[i], rho, g, ball_cells, n));
  }

  const auto& holes_finest = cov.uncovered.back().second;
  const auto& holes_prev = cov.uncovered.size() >= 2
                               ? cov.uncovered[cov.uncovered.size() - 2].second
                               : holes_finest;
  // A hole is persistent when both of the two finest densities leave it
  // uncovered; the verdict stabilized when every finest-density hole is
  // persistent (densification may fill borderline cells, never open new ones).
  std::vector<std::vector<int>> persistent;
  for (const auto& cell : holes_finest) {
    if (std::find(holes_prev.begin(), holes_prev.end(), cell) != holes_prev.end()) {
      persistent.push_back(cell);
    }
  }
  result.stabilized = (persistent == holes_finest);
  if (holes_finest.empty()) {
    result.outcome = Outcome::Satisfied;
    result.notes.push_back("image covers every grid cell inside the ball of radius " +
                           std::to_string(rho));
  } else if (result.stabilized) {
    result.outcome = Outcome::Violated;
    result.notes.push_back(std::to_string(persistent.size()) +
                           " image cells inside the ball stay uncovered at the two "
                           "finest sampling densities");
  } else {
    result.outcome = Outcome::Inconclusive;
    result.notes.push_back("uncovered image cells differ between the two finest "
                           "sampling densities");
  }
  if (coverage_out) *coverage_out = std::move(cov);
  return result;
}

// ---------------------------------------------------------------------------
// Induced-map evidence (probes + generators)
// ---------------------------------------------------------------------------

namespace {

Chain combine_chains(const std::vector<const Chain*>& chains,
                     const std::vector<long long>& coeffs) {
  std::map<CellKey, long long> acc;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    for (const auto& [key, v] : chains[i]->terms) acc[key] += coeffs[i] * v;
  }
  Chain out;
  for (const auto& [key, v] : acc) {
    if (v != 0) out.terms.emplace_back(key, v);
  }
  return out;
}

}  // namespace

namespace detail {

std::vector<long long> bezout_coefficients(const std::vector<long long>& degrees) {
  std::vector<long long> coeffs(degrees.size(), 0);
  long long g = 0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] == 0) continue;
    if (g == 0) {
      g = degrees[i];
      coeffs[i] = 1;
      continue;
    }
    // extended gcd of (g, degrees[i])
    long long old_r = g, r = degrees[i];
    long long old_s = 1, s = 0;
    long long old_t = 0, t = 1;
    while (r != 0) {
      const long long q = old_r / r;
      long long tmp = old_r - q * r;
      old_r = r;
      r = tmp;
      tmp = old_s - q * s;
      old_s = s;
      s = tmp;
      tmp = old_t - q * t;
      old_t = t;
      t = tmp;
    }
    for (std::size_t j = 0; j < i; ++j) coeffs[j] *= old_s;
    coeffs[i] = old_t;
    g = old_r;
  }
  return coeffs;
}

}  // namespace detail

namespace {

InducedMapReport build_induced_report(const VectorFieldSystem& sys,
                                      const AnalysisParams& params,
                                      const CubicalComplex& finest_complex,
                                      const HomologyProfile& finest_profile,
                                      const std::vector<ProbeLoop>& probes) {
  InducedMapReport report;
  const double delta = params.delta();

  for (const ProbeLoop& probe : probes) {
    ProbeReportEntry entry;
    entry.name = probe.name;
    try {
      entry.certified_inside =
          probe_inside_complex(probe, finest_complex, sys.n, sys.m);
    } catch (const Error& e) {
      entry.note = e.what();
      report.probes.push_back(std::move(entry));
      continue;
    }
    try {
      entry.loop_winding = loop_self_winding(probe, sys.n, sys.m, delta);
    } catch (const Error& e) {
      entry.note = std::string("loop winding: ") + e.what();
    }
    if (sys.n == 2) {
      try {
        entry.image_winding = loop_image_winding(sys, probe, {0, 1}, delta);
      } catch (const Error& e) {
        if (!entry.note.empty()) entry.note += "; ";
        entry.note += std::string("image winding: ") + e.what();
      }
    }
    report.probes.push_back(std::move(entry));
  }

  const int k = sys.n - 1;
  if (k >= 1 && k <= finest_profile.dim) {
    const auto& reps = finest_profile.representatives[k];
    std::vector<long long> degrees;
    std::vector<const Chain*> usable;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      GeneratorReportEntry entry;
      entry.id = "H" + std::to_string(k) + "[" + std::to_string(i) + "]";
      entry.support_cells = static_cast<long long>(reps[i].terms.size());
      try {
        const TopDegreeResult r =
            top_degree(sys, reps[i], finest_complex.grid, delta, params.seed);
        entry.map_degree = r.degree;
        entry.regular_value.assign(r.regular_value.data(),
                                   r.regular_value.data() + r.regular_value.size());
        degrees.push_back(r.degree);
        usable.push_back(&reps[i]);
      } catch (const Error& e) {
        entry.note = e.what();
      }
      report.generators.push_back(std::move(entry));
    }
    const bool direct_witness =
        std::any_of(degrees.begin(), degrees.end(),
                    [](long long v) { return v == 1 || v == -1; });
    long long g = 0;
    for (const long long v : degrees) g = std::gcd(g, v);
    if (!direct_witness && g == 1 && usable.size() >= 2) {
      // Bezout combination of the generators is itself a generator of a Z
      // summand and witnesses surjectivity explicitly.
      const auto coeffs = detail::bezout_coefficients(degrees);
      const Chain combined = combine_chains(usable, coeffs);
      GeneratorReportEntry entry;
      entry.id = "H" + std::to_string(k) + "[combined]";
      entry.support_cells = static_cast<long long>(combined.terms.size());
      try {
        const TopDegreeResult r =
            top_degree(sys, combined, finest_complex.grid, delta, params.seed);
        entry.map_degree = r.degree;
        entry.regular_value.assign(r.regular_value.data(),
                                   r.regular_value.data() + r.regular_value.size());
      } catch (const Error& e) {
        entry.note = e.what();
      }
      report.generators.push_back(std::move(entry));
    }
  }
  for (const auto& gen : report.generators) {
    if (gen.map_degree && std::abs(*gen.map_degree) == 1) {
      report.witnessed_generator = true;
    }
  }
  return report;
}

// Signs taken by the single component of an n = 1 system over the certified
// cubes.
std::pair<bool, bool> certified_signs(const CubicalComplex& complex) {
  bool pos = false, neg = false;
  for (const auto& cert : complex.certificates) {
    if (cert.sign > 0) pos = true;
    if (cert.sign < 0) neg = true;
  }
  return {pos, neg};
}

}  // namespace

// ---------------------------------------------------------------------------
// Coron classical
// ---------------------------------------------------------------------------

ConditionResult check_coron_classical(const VectorFieldSystem& sys,
                                      const AnalysisParams& params,
                                      const std::vector<CubicalComplex>& complexes,
                                      const std::vector<HomologyProfile>& profiles,
                                      const InducedMapReport& induced) {
  (void)params;
  ConditionResult result;
  result.condition = "coron_classical";
  const std::size_t last = profiles.size() - 1;

  if (sys.n == 1) {
    const auto [pos_f, neg_f] = certified_signs(complexes[last]);
    const auto [pos_p, neg_p] = certified_signs(complexes[last - 1]);
    result.stabilized = (pos_f == pos_p && neg_f == neg_p);
    if (pos_f && neg_f) {
      result.outcome = Outcome::Satisfied;
      result.notes.push_back("f takes both signs on certified cubes (n = 1 witness)");
    } else if (result.stabilized) {
      result.outcome = Outcome::Violated;
      result.notes.push_back("f is single-signed on the certified set at both "
                             "finest resolutions");
    } else {
      result.outcome = Outcome::Inconclusive;
    }
    return result;
  }

  const int k = sys.n - 1;
  const int betti_fin = profiles[last].betti_at(k);
  const int betti_prev = profiles[last - 1].betti_at(k);
  result.stabilized = (betti_fin == betti_prev);

  for (const auto& gen : induced.generators) {
    if (gen.map_degree && std::abs(*gen.map_degree) == 1) {
      result.outcome = Outcome::Satisfied;
      result.notes.push_back("generator " + gen.id + " maps with degree " +
                             std::to_string(*gen.map_degree));
      return result;
    }
  }
  if (sys.n == 2) {
    for (const auto& probe : induced.probes) {
      if (probe.certified_inside && probe.image_winding &&
          std::abs(*probe.image_winding) == 1) {
        result.outcome = Outcome::Satisfied;
        result.notes.push_back("probe " + probe.name +
                               " maps with winding number " +
                               std::to_string(*probe.image_winding));
        return result;
      }
    }
  }

  if (betti_fin == 0 && betti_prev == 0) {
    result.outcome = Outcome::Violated;
    result.notes.push_back("betti_" + std::to_string(k) +
                           " of the certified complex stabilized at 0; no class "
                           "can map onto H_" + std::to_string(k) +
                           "(R^n minus 0)");
    return result;
  }
  result.outcome = Outcome::Inconclusive;
  result.notes.push_back("classes exist in degree " + std::to_string(k) +
                         " but no evaluated degree is +-1; absence of a witness "
                         "is not a proof");
  return result;
}

// ---------------------------------------------------------------------------
// Coron strong (cohomology sphere + induced isomorphism witness)
// ---------------------------------------------------------------------------

ConditionResult check_strong(const VectorFieldSystem& sys,
                             const AnalysisParams& params,
                             const std::vector<CubicalComplex>& complexes,
                             const std::vector<HomologyProfile>& profiles,
                             const InducedMapReport& induced) {
  (void)params;
  ConditionResult result;
  result.condition = "coron_strong";
  const std::size_t last = profiles.size() - 1;
  const int d = sys.n - 1;

  result.stabilized = profiles[last].same_groups(profiles[last - 1]);
  const bool sphere = matches_sphere(profiles[last], d);

  if (!sphere) {
    // A sphere must match in every degree, so one persistent defect kills it:
    // Violated when some offending degree carries the same wrong (betti,
    // torsion) value at both of the two finest resolutions.
    const HomologyProfile coh_fine = cohomology(profiles[last]);
    const HomologyProfile coh_prev = cohomology(profiles[last - 1]);
    std::string offending;
    std::string stabilized_defect;
    const int top = std::max({coh_fine.dim, coh_prev.dim, d});
    for (int q = 0; q <= top; ++q) {
      int expected = 0;
      if (q == 0) expected = (d == 0) ? 2 : 1;
      if (q == d && d > 0) expected = 1;
      const bool torsion_fine = q <= coh_fine.dim && !coh_fine.torsion[q].empty();
      const bool defect = coh_fine.betti_at(q) != expected || torsion_fine;
      if (!defect) continue;
      const std::string what = "H^" + std::to_string(q) + " = Z^" +
                               std::to_string(coh_fine.betti_at(q)) +
                               (torsion_fine ? " plus torsion" : "") +
                               " (expected Z^" + std::to_string(expected) + ")";
      if (!offending.empty()) offending += ", ";
      offending += what;
      const bool same_as_prev =
          coh_fine.betti_at(q) == coh_prev.betti_at(q) &&
          ((q <= coh_fine.dim ? coh_fine.torsion[q] : std::vector<long long>{}) ==
           (q <= coh_prev.dim ? coh_prev.torsion[q] : std::vector<long long>{}));
      if (same_as_prev && stabilized_defect.empty()) stabilized_defect = what;
    }
    if (!stabilized_defect.empty()) {
      result.outcome = Outcome::Violated;
      result.stabilized = true;  // the offending quantity agreed on both
      result.notes.push_back("certified complex is not a cohomology " +
                             std::to_string(d) +
                             "-sphere; stabilized defect: " + stabilized_defect);
      if (offending != stabilized_defect) {
        result.notes.push_back("all defects at the finest resolution: " + offending);
      }
    } else {
      result.outcome = Outcome::Inconclusive;
      result.notes.push_back("sphere profile fails at the finest resolution (" +
                             offending + ") but no defect has stabilized");
    }
    return result;
  }

  // Sphere profile holds; look for the top-degree witness. betti_0 = 1 comes
  // with the sphere profile, and the image of a connected set is connected.
  if (sys.n == 1) {
    const auto [pos, neg] = certified_signs(complexes[last]);
    if (pos && neg) {
      result.outcome = Outcome::Satisfied;
      result.notes.push_back("S^0 profile with both signs witnessed (n = 1)");
    } else {
      result.outcome = Outcome::Inconclusive;
    }
    return result;
  }

  for (const auto& gen : induced.generators) {
    if (gen.map_degree && std::abs(*gen.map_degree) == 1) {
      result.outcome = Outcome::Satisfied;
      result.notes.push_back("cohomology " + std::to_string(d) +
                             "-sphere profile with generator " + gen.id +
                             " of degree " + std::to_string(*gen.map_degree));
      return result;
    }
  }
  if (sys.n == 2) {
    for (const auto& probe : induced.probes) {
      if (probe.certified_inside && probe.image_winding &&
          std::abs(*probe.image_winding) == 1) {
        result.outcome = Outcome::Satisfied;
        result.notes.push_back("cohomology 1-sphere profile with probe " +
                               probe.name + " winding " +
                               std::to_string(*probe.image_winding));
        return result;
      }
    }
  }
  result.outcome = Outcome::Inconclusive;
  bool had_error = false;
  for (const auto& gen : induced.generators) {
    if (!gen.note.empty()) had_error = true;
  }
  result.notes.push_back(had_error
                             ? "sphere profile holds but degree evaluation failed"
                             : "sphere profile holds but no unit-degree witness "
                               "was found");
  return result;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

Report analyze(const VectorFieldSystem& sys, const AnalysisParams& params,
               const std::vector<ProbeLoop>& user_probes) {
  sys.validate();
  params.validate();
  if (params.resolutions.size() < 2) {
    throw ValidationError("analysis needs at least 2 resolutions for "
                          "stabilization");
  }

  Report report;
  report.system_name = sys.name;
  report.n = sys.n;
  report.m = sys.m;
  for (const auto& c : sys.components) report.components.push_back(to_string(c));
  report.epsilon = params.epsilon;
  report.resolutions = params.resolutions;
  report.probe_radius = params.effective_probe_radius();
  report.samples_per_cube = params.samples_per_cube;
  report.seed = params.seed;

  const std::vector<CubicalComplex> complexes = neighborhood_filtration(sys, params);
  std::vector<HomologyProfile> profiles;
  profiles.reserve(complexes.size());
  for (std::size_t i = 0; i < complexes.size(); ++i) {
    const bool finest = (i + 1 == complexes.size());
    profiles.push_back(cubical_homology(complexes[i], finest, params.max_cells));
    ResolutionProfile rp;
    rp.resolution = params.resolutions[i];
    rp.top_cubes = static_cast<long long>(complexes[i].top_cubes.size());
    rp.total_cells = cubical_cell_count(complexes[i], params.max_cells);
    rp.betti = profiles.back().betti;
    rp.torsion = profiles.back().torsion;
    report.profiles.push_back(std::move(rp));
  }

  // Coordinate-plane probes are generated only when the config supplies none;
  // user probes override the automatic set.
  const std::vector<ProbeLoop> probes =
      user_probes.empty() ? auto_probes(sys, params) : user_probes;
  report.induced = build_induced_report(sys, params, complexes.back(),
                                        profiles.back(), probes);

  report.brockett = check_brockett(sys, params, &report.coverage);
  report.coron_classical =
      check_coron_classical(sys, params, complexes, profiles, report.induced);
  report.coron_strong =
      check_strong(sys, params, complexes, profiles, report.induced);

  const bool violated = report.brockett.outcome == Outcome::Violated ||
                        report.coron_classical.outcome == Outcome::Violated ||
                        report.coron_strong.outcome == Outcome::Violated;
  report.verdict = violated ? "NotStabilizable" : "NoObstructionFound";

  report.caveats.push_back(
      "All three conditions are necessary only: NoObstructionFound does not "
      "establish stabilizability. Systems are known that pass every check "
      "here yet admit no continuous stabilizing feedback.");
  report.caveats.push_back(
      "(Co)homology is computed on certified inner approximations of the "
      "nonvanishing set at finite grid resolutions; a reported absence is "
      "trusted only when it is stable across the two finest resolutions.");
  for (const ConditionResult* cr :
       {&report.brockett, &report.coron_classical, &report.coron_strong}) {
    if (cr->outcome == Outcome::Inconclusive) {
      report.caveats.push_back("condition " + cr->condition +
                               " is inconclusive at the configured resolutions");
    }
  }
  return report;
}

}  // namespace stabcheck
