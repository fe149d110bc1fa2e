#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stabcheck/degree.hpp"

using namespace stabcheck;

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Matrix2Xd circle_samples(int k, int count, double radius = 1.0) {
  Eigen::Matrix2Xd pts(2, count + 1);
  for (int i = 0; i <= count; ++i) {
    const double t = 2.0 * kPi * i / count;
    pts(0, i) = radius * std::cos(k * t);
    pts(1, i) = radius * std::sin(k * t);
  }
  pts.col(count) = pts.col(0);
  return pts;
}

/// Boundary 2-cycle of the solid box: sum of d(Q) over all top cubes of the
/// res-2 grid (interior faces cancel, leaving the outward-oriented shell).
Chain hollow_box_generator(const GridGeometry& grid) {
  std::map<CellKey, long long> acc;
  std::array<int, kMaxDim> idx{};
  long long total = 1;
  for (int a = 0; a < grid.dim; ++a) total *= grid.resolution;
  for (long long c = 0; c < total; ++c) {
    std::array<int, kMaxDim> doubled{};
    for (int a = 0; a < grid.dim; ++a) doubled[a] = 2 * idx[a] + 1;
    const CellKey cube =
        pack_cell({doubled.data(), static_cast<std::size_t>(grid.dim)});
    for (const auto& [face, sgn] : cell_faces(cube, grid.dim)) acc[face] += sgn;
    for (int a = 0; a < grid.dim; ++a) {
      if (++idx[a] < grid.resolution) break;
      idx[a] = 0;
    }
  }
  Chain z;
  for (const auto& [key, v] : acc) {
    if (v != 0) z.terms.emplace_back(key, v);
  }
  return z;
}

Chain ring_generator(const GridGeometry& grid) {
  // outline of the central 2x2 block of a res-4 planar grid: the H_1
  // generator of the annulus, oriented as the boundary of the block
  std::map<CellKey, long long> acc;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      const CellKey cube = pack_cell(std::array<int, 2>{2 * i + 1, 2 * j + 1});
      for (const auto& [face, sgn] : cell_faces(cube, grid.dim)) acc[face] += sgn;
    }
  }
  Chain z;
  for (const auto& [key, v] : acc) {
    if (v != 0) z.terms.emplace_back(key, v);
  }
  return z;
}

VectorFieldSystem z_square_times_identity() {
  VectorFieldSystem sys;
  sys.name = "z2-equator";
  sys.n = 3;
  sys.m = 0;
  sys.components = {parse("x1^2 - x2^2", 3, 0), parse("2*x1*x2", 3, 0),
                    parse("x3", 3, 0)};
  return sys;
}

}  // namespace

TEST_CASE("winding of (cos kt, sin kt) is k for k in -3..3") {
  for (int k = -3; k <= 3; ++k) {
    if (k == 0) continue;  // constant loops sit at a single angle
    CHECK(winding_number(circle_samples(k, 256), 1e-9) == k);
  }
  // k = 0 as a non-closing degenerate circle still winds zero when offset
  Eigen::Matrix2Xd pts(2, 129);
  for (int i = 0; i <= 128; ++i) {
    const double t = 2.0 * kPi * i / 128;
    pts(0, i) = 2.0 + 0.5 * std::cos(t);
    pts(1, i) = 0.5 * std::sin(t);
  }
  CHECK(winding_number(pts, 1e-9) == 0);
}

TEST_CASE("winding error paths") {
  // 17 turns over 64 samples puts every angular step above pi/2
  CHECK_THROWS_AS(winding_number(circle_samples(17, 64), 1e-9), TooCoarseError);
  CHECK_THROWS_AS(winding_number(circle_samples(1, 256, 1e-12), 1e-9),
                  OriginTooCloseError);
}

TEST_CASE("winding is invariant under small perturbations and negates on reversal") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);  // < delta/4 scale
  Eigen::Matrix2Xd pts = circle_samples(2, 512);
  for (Eigen::Index c = 0; c + 1 < pts.cols(); ++c) {
    pts(0, c) += jitter(rng) * 0.1;
    pts(1, c) += jitter(rng) * 0.1;
  }
  pts.col(pts.cols() - 1) = pts.col(0);
  CHECK(winding_number(pts, 1e-9) == 2);
  CHECK(winding_number(pts.rowwise().reverse(), 1e-9) == -2);
}

TEST_CASE("doubling a loop doubles the winding") {
  const Eigen::Matrix2Xd once = circle_samples(1, 128);
  Eigen::Matrix2Xd twice(2, 257);
  for (int i = 0; i < 128; ++i) {
    twice.col(i) = once.col(i);
    twice.col(128 + i) = once.col(i);
  }
  twice.col(256) = once.col(0);
  CHECK(winding_number(twice, 1e-9) == 2 * winding_number(once, 1e-9));
}

TEST_CASE("image windings: identity, complex square, reflection") {
  AnalysisParams params;
  params.epsilon = 1.0;
  ProbeLoop loop;
  loop.name = "unit";
  loop.components = {parse("0.5*cos(t)", 2, 0, true), parse("0.5*sin(t)", 2, 0, true)};
  loop.projection = {0, 1};

  const auto identity = testing::identity_system(2, 0);
  CHECK(loop_image_winding(identity, loop, {0, 1}, params.delta()) == 1);

  VectorFieldSystem square;
  square.n = 2;
  square.m = 0;
  square.components = {parse("x1^2 - x2^2", 2, 0), parse("2*x1*x2", 2, 0)};
  CHECK(loop_image_winding(square, loop, {0, 1}, params.delta()) == 2);

  VectorFieldSystem reflect;
  reflect.n = 2;
  reflect.m = 0;
  reflect.components = {parse("x1", 2, 0), parse("0 - x2", 2, 0)};
  CHECK(loop_image_winding(reflect, loop, {0, 1}, params.delta()) == -1);
}

TEST_CASE("loops through the zero set raise ZeroCrossing") {
  VectorFieldSystem flat;
  flat.n = 2;
  flat.m = 0;
  flat.components = {parse("x1 - x1", 2, 0), parse("x2 - x2", 2, 0)};
  ProbeLoop loop;
  loop.name = "unit";
  loop.components = {parse("0.5*cos(t)", 2, 0, true), parse("0.5*sin(t)", 2, 0, true)};
  CHECK_THROWS_AS(loop_image_winding(flat, loop, {0, 1}, 1e-9), ZeroCrossingError);
}

TEST_CASE("gamma probe projected to (x3, u1) winds once") {
  const auto sys = testing::coron_system();
  ProbeLoop gamma;
  gamma.name = "gamma";
  gamma.components = {parse("0", 3, 1, true), parse("0", 3, 1, true),
                      parse("0.0625*cos(t)", 3, 1, true),
                      parse("0.0625*sin(t)", 3, 1, true)};
  gamma.projection = {2, 3};  // (x3, u1)
  CHECK(loop_self_winding(gamma, sys.n, sys.m, 1e-9) == 1);
}

TEST_CASE("top degree of the identity field on the hollow box shell is +1") {
  const GridGeometry grid{3, 2, 1.0};
  const Chain shell = hollow_box_generator(grid);
  REQUIRE(shell.terms.size() == 24);  // 6 sides of 4 squares each
  const auto sys = testing::identity_system(3, 0);
  const TopDegreeResult r = top_degree(sys, shell, grid, 1e-7, 11);
  CHECK(r.degree == 1);
  CHECK(testing::solid_angle_degree(sys, shell, grid) == 1);
}

TEST_CASE("constant field has degree zero") {
  const GridGeometry grid{3, 2, 1.0};
  const Chain shell = hollow_box_generator(grid);
  VectorFieldSystem constant;
  constant.n = 3;
  constant.m = 0;
  constant.components = {parse("1", 3, 0), parse("0", 3, 0), parse("0", 3, 0)};
  const TopDegreeResult r = top_degree(constant, shell, grid, 1e-7, 5);
  CHECK(r.degree == 0);
}

TEST_CASE("z-square equator field has degree of magnitude 2") {
  const GridGeometry grid{3, 2, 1.0};
  const Chain shell = hollow_box_generator(grid);
  const auto sys = z_square_times_identity();
  const TopDegreeResult r = top_degree(sys, shell, grid, 1e-7, 13);
  CHECK(std::abs(r.degree) == 2);
  CHECK(r.degree == testing::solid_angle_degree(sys, shell, grid));
}

TEST_CASE("degree is independent of the admissible regular value") {
  const GridGeometry grid{3, 2, 1.0};
  const Chain shell = hollow_box_generator(grid);
  const auto sys = z_square_times_identity();
  int first = 0;
  for (int s = 0; s < 10; ++s) {
    const TopDegreeResult r = top_degree(sys, shell, grid, 1e-7, 1000 + s);
    if (s == 0) {
      first = r.degree;
    } else {
      REQUIRE(r.degree == first);
    }
  }
}

TEST_CASE("planar cycles: degree equals the winding of f along the ring") {
  const GridGeometry grid{2, 4, 1.0};
  const Chain ring = ring_generator(grid);
  REQUIRE(ring.terms.size() == 8);
  const auto identity = testing::identity_system(2, 0);
  const TopDegreeResult r = top_degree(identity, ring, grid, 1e-7, 3);
  CHECK(r.degree == 1);
  CHECK(testing::angle_sweep_degree(identity, ring, grid) == 1);

  VectorFieldSystem square;
  square.n = 2;
  square.m = 0;
  square.components = {parse("x1^2 - x2^2", 2, 0), parse("2*x1*x2", 2, 0)};
  const TopDegreeResult r2 = top_degree(square, ring, grid, 1e-7, 3);
  CHECK(r2.degree == 2);
  CHECK(testing::angle_sweep_degree(square, ring, grid) == 2);
}

TEST_CASE("reversal negates the top degree") {
  const GridGeometry grid{3, 2, 1.0};
  Chain shell = hollow_box_generator(grid);
  Chain reversed = shell;
  for (auto& [key, v] : reversed.terms) v = -v;
  const auto sys = testing::identity_system(3, 0);
  CHECK(top_degree(sys, shell, grid, 1e-7, 2).degree == 1);
  CHECK(top_degree(sys, reversed, grid, 1e-7, 2).degree == -1);
}

TEST_CASE("top degree rejects non-cycles and off-dimension chains") {
  const GridGeometry grid{3, 2, 1.0};
  const auto sys = testing::identity_system(3, 0);
  Chain not_cycle;
  not_cycle.terms.emplace_back(pack_cell(std::array<int, 3>{1, 1, 0}), 1);
  CHECK_THROWS_AS(top_degree(sys, not_cycle, grid, 1e-7, 2), NotACycleError);
  Chain wrong_dim;
  wrong_dim.terms.emplace_back(pack_cell(std::array<int, 3>{1, 1, 1}), 1);
  CHECK_THROWS_AS(top_degree(sys, wrong_dim, grid, 1e-7, 2), NotACycleError);
}

TEST_CASE("zero crossing on a facet raises") {
  const GridGeometry grid{3, 2, 1.0};
  const Chain shell = hollow_box_generator(grid);
  VectorFieldSystem vanishing;
  vanishing.n = 3;
  vanishing.m = 0;
  // vanishes on the x3 = 1 face of the shell
  vanishing.components = {parse("x3 - 1", 3, 0), parse("x3 - 1", 3, 0),
                          parse("x3 - 1", 3, 0)};
  CHECK_THROWS_AS(top_degree(vanishing, shell, grid, 1e-7, 2), ZeroCrossingError);
}

TEST_CASE("auto probes cover every state-state and state-input plane") {
  const auto sys = testing::coron_system();
  AnalysisParams params;
  params.epsilon = 0.5;
  const auto probes = auto_probes(sys, params);
  // n = 3, m = 1: pairs (x1,x2),(x1,x3),(x1,u1),(x2,x3),(x2,u1),(x3,u1)
  REQUIRE(probes.size() == 6);
  CHECK(probes.back().name == "auto(x3,u1)");
  for (const auto& p : probes) {
    CHECK(loop_self_winding(p, sys.n, sys.m, params.delta()) == 1);
  }
}

TEST_CASE("probe certification against the certified complex") {
  const auto sys = testing::coron_system();
  AnalysisParams params;
  params.epsilon = 0.5;
  params.resolutions = {8, 16};
  params.probe_radius = 0.09375;  // 3 cells at resolution 16
  const CubicalComplex coarse = build_sigma_complex(sys, params, 8);
  const CubicalComplex fine = build_sigma_complex(sys, params, 16);
  ProbeLoop gamma;
  gamma.name = "gamma";
  gamma.components = {parse("0", 3, 1, true), parse("0", 3, 1, true),
                      parse("0.09375*cos(t)", 3, 1, true),
                      parse("0.09375*sin(t)", 3, 1, true)};
  gamma.projection = {2, 3};
  // the loop crosses the coarse grid's uncertifiable slab but clears it at
  // the finer resolution
  CHECK_FALSE(probe_inside_complex(gamma, coarse, sys.n, sys.m));
  CHECK(probe_inside_complex(gamma, fine, sys.n, sys.m));
}
