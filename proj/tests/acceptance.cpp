// Acceptance suite: end-to-end runs of the shipped fixtures plus the
// property-based backstops, one PASS/FAIL line per criterion. All expected
// values are exact integers or zero-tolerance containment checks.

#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "stabcheck/checker.hpp"
#include "stabcheck/cli.hpp"
#include "stabcheck/degree.hpp"
#include "stabcheck/report_io.hpp"
#include "stabcheck/snf.hpp"

using namespace stabcheck;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << "CRITERION " << criterion << ": " << (pass ? "PASS" : "FAIL")
            << " - " << detail << "\n";
  if (!pass) ++failures;
}

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

const std::string kFixtures = STABCHECK_FIXTURE_DIR;

// --------------------------------------------------------------------------
// 1. Coron insufficiency system end-to-end
// --------------------------------------------------------------------------
void criterion_1() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  try {
    const RunConfig config = load_config(kFixtures + "/coron3d.cfg");
    const Report r = analyze(config.system, config.params, config.probes);

    c.require(r.profiles.size() == 2, "expected two resolutions");
    const int b1_coarse = r.profiles[0].betti.size() > 1 ? r.profiles[0].betti[1] : -1;
    const int b1_fine = r.profiles[1].betti.size() > 1 ? r.profiles[1].betti[1] : -1;
    c.require(b1_coarse == b1_fine,
              "betti_1 differs across resolutions (" + std::to_string(b1_coarse) +
                  " vs " + std::to_string(b1_fine) + ")");
    c.require(b1_fine > 0, "betti_1 is zero at the finest resolution");

    HomologyProfile fine;
    fine.dim = static_cast<int>(r.profiles[1].betti.size()) - 1;
    fine.betti = r.profiles[1].betti;
    fine.torsion = r.profiles[1].torsion;
    c.require(!matches_sphere(fine, 2), "profile matches a 2-sphere");

    bool probe_ok = false;
    for (const auto& p : r.induced.probes) {
      if (p.name == "probe1" && p.loop_winding && *p.loop_winding == 1) {
        probe_ok = true;
      }
    }
    c.require(probe_ok, "probe gamma winding != 1");

    c.require(r.verdict == "NotStabilizable", "verdict is " + r.verdict);
    c.require(r.coron_classical.outcome == Outcome::Satisfied,
              std::string("coron_classical is ") +
                  to_string(r.coron_classical.outcome));
    c.require(r.coron_strong.outcome == Outcome::Violated,
              std::string("coron_strong is ") + to_string(r.coron_strong.outcome));
    c.require(r.brockett.outcome == Outcome::Satisfied,
              std::string("brockett is ") + to_string(r.brockett.outcome));
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const auto secs = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  c.require(secs < 300.0, "runtime exceeded 5 minutes");
  std::ostringstream os;
  os << "coron3d end-to-end (betti_1 stable and nonzero, no 2-sphere, gamma "
        "winds once, NotStabilizable with classical Satisfied; "
     << static_cast<int>(secs) << "s)";
  report(1, c.ok, c.ok ? os.str() : c.detail);
}

// --------------------------------------------------------------------------
// 2. Identity with passive input end-to-end
// --------------------------------------------------------------------------
void criterion_2() {
  Check c;
  try {
    const RunConfig config = load_config(kFixtures + "/identity2d.cfg");
    const Report r = analyze(config.system, config.params, config.probes);

    for (const auto& p : r.profiles) {
      c.require(p.betti == std::vector<int>{1, 1, 0, 0},
                "betti table is not (1,1,0,0) at resolution " +
                    std::to_string(p.resolution));
      for (const auto& t : p.torsion) {
        c.require(t.empty(), "unexpected torsion");
      }
    }
    HomologyProfile fine;
    fine.dim = 3;
    fine.betti = r.profiles[1].betti;
    fine.torsion = r.profiles[1].torsion;
    c.require(matches_sphere(fine, 1), "stabilized profile is not SphereProfile(1)");
    c.require(r.induced.witnessed_generator, "no top-degree witness of +-1");
    c.require(r.verdict == "NoObstructionFound", "verdict is " + r.verdict);
    bool caveat = false;
    for (const auto& s : r.caveats) {
      if (s.find("necessary only") != std::string::npos) caveat = true;
    }
    c.require(caveat, "non-sufficiency caveat missing");
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  report(2, c.ok,
         c.ok ? "identity2d end-to-end (exact SphereProfile(1), witness +-1, "
                "NoObstructionFound with caveat)"
              : c.detail);
}

// --------------------------------------------------------------------------
// 3. Brockett integrator
// --------------------------------------------------------------------------
void criterion_3() {
  Check c;
  try {
    const RunConfig config = load_config(kFixtures + "/brockett_integrator.cfg");
    const Report r = analyze(config.system, config.params, config.probes);
    c.require(r.brockett.outcome == Outcome::Violated,
              std::string("brockett is ") + to_string(r.brockett.outcome));
    c.require(r.verdict == "NotStabilizable", "verdict is " + r.verdict);
    const auto& holes = r.coverage.uncovered.empty()
                            ? std::vector<std::vector<int>>{}
                            : r.coverage.uncovered.back().second;
    c.require(!holes.empty(), "no uncovered cells listed");
    const int mid_lo = r.coverage.grid_cells / 2 - 1;
    const int mid_hi = r.coverage.grid_cells / 2;
    bool axis_hole = false;
    for (const auto& cell : holes) {
      if (cell.size() == 3 && (cell[0] == mid_lo || cell[0] == mid_hi) &&
          (cell[1] == mid_lo || cell[1] == mid_hi) &&
          (cell[2] < mid_lo || cell[2] > mid_hi)) {
        axis_hole = true;
      }
    }
    c.require(axis_hole, "uncovered cells do not include the x3 axis");
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  report(3, c.ok,
         c.ok ? "brockett integrator (openness Violated with x3-axis holes, "
                "NotStabilizable)"
              : c.detail);
}

// --------------------------------------------------------------------------
// 4. Homology engine vs rational-rank brute force
// --------------------------------------------------------------------------
void criterion_4() {
  Check c;
  try {
    std::mt19937_64 rng(8675309);
    for (int trial = 0; trial < 100; ++trial) {
      const ChainComplex cc = testing::random_cubical_chain_complex(rng);
      if (cc.total_cells() > 500) {
        c.require(false, "random complex exceeded 500 cells");
        break;
      }
      if (!boundary_squares_to_zero(cc)) {
        c.require(false, "dd != 0 on random complex " + std::to_string(trial));
        break;
      }
      const HomologyProfile h = homology(cc, false);
      const auto oracle = testing::betti_by_rational_rank(cc);
      if (h.betti != oracle) {
        c.require(false, "betti mismatch on random complex " + std::to_string(trial));
        break;
      }
    }

    // named fixtures
    const GridGeometry plane{2, 4, 1.0};
    std::vector<CellKey> circle_edges;
    for (const auto& [face, s] :
         cell_faces(pack_cell(std::array<int, 2>{3, 3}), 2)) {
      (void)s;
      circle_edges.push_back(face);
    }
    const HomologyProfile circle =
        homology(testing::complex_from_cells(plane, circle_edges), false);
    c.require(circle.betti == std::vector<int>{1, 1, 0}, "circle betti != (1,1)");

    const GridGeometry space{3, 2, 1.0};
    std::vector<CellKey> shell_faces;
    for (const auto& [face, s] :
         cell_faces(pack_cell(std::array<int, 3>{1, 1, 1}), 3)) {
      (void)s;
      shell_faces.push_back(face);
    }
    const HomologyProfile sphere =
        homology(testing::complex_from_cells(space, shell_faces), false);
    c.require(sphere.betti == std::vector<int>{1, 0, 1, 0},
              "hollow cube betti != (1,0,1)");

    CubicalComplex solid;
    solid.grid = GridGeometry{3, 2, 1.0};
    std::array<int, 3> origin{0, 0, 0};
    solid.top_cubes.push_back(pack_cell({origin.data(), 3}));
    solid.certificates.push_back(CubeCertificate{0, 1.0, 1});
    const HomologyProfile box = homology(assemble_chain_complex(solid), false);
    c.require(box.betti == std::vector<int>{1, 0, 0, 0}, "solid box betti != (1,0,0)");

    std::vector<CellKey> two_edges;
    for (const int o : {0, 2}) {
      for (const auto& [face, s] : cell_faces(
               pack_cell(std::array<int, 2>{2 * o + 1, 2 * o + 1}), 2)) {
        (void)s;
        two_edges.push_back(face);
      }
    }
    const HomologyProfile two =
        homology(testing::complex_from_cells(plane, two_edges), false);
    c.require(two.betti == std::vector<int>{2, 2, 0},
              "two disjoint circles betti != (2,2)");
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  report(4, c.ok,
         c.ok ? "homology equals rational-rank brute force on 100 random "
                "complexes and all named fixtures"
              : c.detail);
}

// --------------------------------------------------------------------------
// 5. SNF property suite
// --------------------------------------------------------------------------
void criterion_5() {
  Check c;
  try {
    std::mt19937_64 rng(271828);
    for (int trial = 0; trial < 1000 && c.ok; ++trial) {
      const Eigen::MatrixX<long long> a = testing::random_int_matrix(rng, 30, 9);
      SmithNormalForm<BigInt> s;
      Eigen::MatrixX<BigInt> big = a.cast<BigInt>();
      try {
        const auto narrow = smith_normal_form<long long>(a, kDefaultSnfGuard);
        s.D = narrow.D.cast<BigInt>();
        s.U = narrow.U.cast<BigInt>();
        s.V = narrow.V.cast<BigInt>();
        s.U_inv = narrow.U_inv.cast<BigInt>();
        s.V_inv = narrow.V_inv.cast<BigInt>();
        for (const auto f : narrow.invariant_factors) {
          s.invariant_factors.push_back(BigInt(f));
        }
      } catch (const OverflowError&) {
        s = smith_normal_form<BigInt>(big);
      }
      c.require(testing::mat_equal<BigInt>(
                    testing::mat_mul<BigInt>(testing::mat_mul<BigInt>(s.U, big),
                                             s.V),
                    s.D),
                "U*A*V != D at trial " + std::to_string(trial));
      c.require(testing::mat_mul<BigInt>(s.U, s.U_inv).isIdentity() &&
                    testing::mat_mul<BigInt>(s.V, s.V_inv).isIdentity(),
                "U or V not unimodular at trial " + std::to_string(trial));
      for (std::size_t i = 0; i + 1 < s.invariant_factors.size(); ++i) {
        c.require(s.invariant_factors[i + 1] % s.invariant_factors[i] == 0,
                  "divisibility chain broken at trial " + std::to_string(trial));
      }
    }
    // 50-case subsample: product of invariant factors vs gcd of k x k minors
    std::mt19937_64 rng2(314159);
    for (int trial = 0; trial < 50 && c.ok; ++trial) {
      std::uniform_int_distribution<int> dim(1, 6);
      std::uniform_int_distribution<int> entry(-9, 9);
      const int rows = dim(rng2), cols = dim(rng2);
      Eigen::MatrixX<long long> m(rows, cols);
      std::vector<std::vector<BigInt>> a(rows, std::vector<BigInt>(cols));
      for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
          m(i, j) = entry(rng2);
          a[i][j] = m(i, j);
        }
      }
      std::vector<BigInt> factors;
      int rank = 0;
      try {
        const auto s = smith_normal_form<long long>(m, kDefaultSnfGuard);
        for (const auto f : s.invariant_factors) factors.push_back(BigInt(f));
        rank = s.rank;
      } catch (const OverflowError&) {
        const auto s = smith_normal_form<BigInt>(m.cast<BigInt>());
        factors = s.invariant_factors;
        rank = s.rank;
      }
      BigInt product = 1;
      for (int k = 1; k <= rank; ++k) {
        product *= factors[k - 1];
        if (product != testing::determinantal_divisor(a, k)) {
          c.require(false, "determinantal divisor mismatch at trial " +
                               std::to_string(trial));
          break;
        }
      }
    }
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  report(5, c.ok,
         c.ok ? "1000 random SNFs satisfy U*A*V=D, unimodularity and "
                "divisibility; invariant-factor products equal minor gcds on "
                "the 50-case subsample"
              : c.detail);
}

// --------------------------------------------------------------------------
// 6. Degree suite
// --------------------------------------------------------------------------
void criterion_6() {
  Check c;
  try {
    for (int k = -3; k <= 3; ++k) {
      Eigen::Matrix2Xd pts(2, 257);
      for (int i = 0; i <= 256; ++i) {
        const double t = 2.0 * 3.14159265358979323846 * i / 256;
        pts(0, i) = std::cos(k * t);
        pts(1, i) = std::sin(k * t);
      }
      pts.col(256) = pts.col(0);
      const int w = winding_number(pts, 1e-9);
      if (w != k) {
        c.require(false, "winding of (cos " + std::to_string(k) + "t, sin " +
                             std::to_string(k) + "t) = " + std::to_string(w));
      }
    }

    const GridGeometry grid{3, 2, 1.0};
    std::map<CellKey, long long> acc;
    std::array<int, kMaxDim> idx{};
    for (long long q = 0; q < 8; ++q) {
      std::array<int, kMaxDim> doubled{};
      for (int a = 0; a < 3; ++a) doubled[a] = 2 * idx[a] + 1;
      for (const auto& [face, sgn] :
           cell_faces(pack_cell({doubled.data(), 3}), 3)) {
        acc[face] += sgn;
      }
      for (int a = 0; a < 3; ++a) {
        if (++idx[a] < 2) break;
        idx[a] = 0;
      }
    }
    Chain shell;
    for (const auto& [key, v] : acc) {
      if (v != 0) shell.terms.emplace_back(key, v);
    }

    const auto identity = testing::identity_system(3, 0);
    const TopDegreeResult rid = top_degree(identity, shell, grid, 1e-7, 11);
    c.require(rid.degree == 1, "identity degree " + std::to_string(rid.degree));

    VectorFieldSystem zsq;
    zsq.n = 3;
    zsq.m = 0;
    zsq.components = {parse("x1^2 - x2^2", 3, 0), parse("2*x1*x2", 3, 0),
                      parse("x3", 3, 0)};
    const TopDegreeResult rz = top_degree(zsq, shell, grid, 1e-7, 11);
    c.require(std::abs(rz.degree) == 2,
              "z^2-equator degree " + std::to_string(rz.degree));

    int first = rz.degree;
    for (int s = 0; s < 10; ++s) {
      const TopDegreeResult r = top_degree(zsq, shell, grid, 1e-7, 5000 + 17 * s);
      if (r.degree != first) {
        c.require(false, "degree depends on the regular value");
        break;
      }
    }
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  report(6, c.ok,
         c.ok ? "windings k in -3..3 exact; identity shell degree +1; "
                "z^2-equator degree magnitude 2; regular-value independent "
                "over 10 directions"
              : c.detail);
}

// --------------------------------------------------------------------------
// 7. Interval soundness, 1e5 random triples
// --------------------------------------------------------------------------
void criterion_7() {
  Check c;
  try {
    std::mt19937_64 rng(5551212);
    long long violations = 0;
    long long tested = 0;
    while (tested < 100000) {
      const Expression e = testing::random_expression(rng, 2, 1);
      const auto box = testing::random_box(rng, 3);
      Interval enclosure;
      try {
        enclosure = eval_interval(e, box, 2, 1);
      } catch (const DomainError&) {
        continue;
      }
      const Eigen::VectorXd p = testing::random_point_in_box(rng, box);
      double v;
      try {
        v = eval_point(e, p.head(2), p.tail(1));
      } catch (const DomainError&) {
        continue;
      }
      ++tested;
      if (!enclosure.contains(v)) ++violations;
    }
    c.require(violations == 0,
              std::to_string(violations) + " soundness violations");
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  report(7, c.ok,
         c.ok ? "100000 random (expression, box, point) triples, zero "
                "enclosure violations"
              : c.detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  if (failures == 0) {
    std::cout << "ALL CRITERIA PASS\n";
    return 0;
  }
  std::cout << failures << " CRITERIA FAILED\n";
  return 1;
}
