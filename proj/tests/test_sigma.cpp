#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "stabcheck/cubical.hpp"

using namespace stabcheck;

namespace {

AnalysisParams params_with(double eps, std::vector<int> res) {
  AnalysisParams p;
  p.epsilon = eps;
  p.resolutions = std::move(res);
  return p;
}

VectorFieldSystem constant_one(int n, int m) {
  VectorFieldSystem sys;
  sys.name = "never-zero";
  sys.n = n;
  sys.m = m;
  for (int i = 0; i < n; ++i) sys.components.push_back(parse("1", n, m));
  return sys;
}

Eigen::Vector2d vec2(double x, double y) { return Eigen::Vector2d(x, y); }

}  // namespace

TEST_CASE("identity in the plane: all cubes except the four at the origin") {
  const auto sys = testing::identity_system(2, 0);
  const auto params = params_with(1.0, {8});
  const CubicalComplex complex = build_sigma_complex(sys, params, 8);
  CHECK(complex.top_cubes.size() == 60);  // 64 minus the 4 touching the origin
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const bool touches_origin = (i == 3 || i == 4) && (j == 3 || j == 4);
      const std::array<int, 2> idx{i, j};
      CHECK(complex.contains_cube(pack_cell({idx.data(), 2})) == !touches_origin);
    }
  }
}

TEST_CASE("a field with no zeros certifies every cube") {
  const auto sys = constant_one(2, 0);
  const auto params = params_with(0.5, {4, 8});
  for (const int r : {4, 8}) {
    const CubicalComplex complex = build_sigma_complex(sys, params, r);
    CHECK(static_cast<int>(complex.top_cubes.size()) == r * r);
  }
}

TEST_CASE("Coron system: excluded cubes match the exact combinatorial oracle") {
  const auto sys = testing::coron_system();
  const auto params = params_with(0.5, {8});
  const CubicalComplex complex = build_sigma_complex(sys, params, 8);

  // Exact exclusion rule for this field on a grid: a cube fails certification
  // iff its u interval straddles 0 and (its x3 interval straddles 0, or both
  // x1-x2 and x2-x3 straddle 0, i.e. adjacent indices).
  const int R = 8;
  long long included = 0;
  for (int i1 = 0; i1 < R; ++i1) {
    for (int i2 = 0; i2 < R; ++i2) {
      for (int i3 = 0; i3 < R; ++i3) {
        for (int iu = 0; iu < R; ++iu) {
          const bool u_zero = (iu == R / 2 - 1 || iu == R / 2);
          const bool x3_zero = (i3 == R / 2 - 1 || i3 == R / 2);
          const bool diag = std::abs(i1 - i2) <= 1 && std::abs(i2 - i3) <= 1;
          const bool excluded = u_zero && (x3_zero || diag);
          const std::array<int, 4> idx{i1, i2, i3, iu};
          const bool in = complex.contains_cube(pack_cell({idx.data(), 4}));
          CAPTURE(i1);
          CAPTURE(i2);
          CAPTURE(i3);
          CAPTURE(iu);
          REQUIRE(in == !excluded);
          included += in;
        }
      }
    }
  }
  CHECK(included == static_cast<long long>(complex.top_cubes.size()));
}

TEST_CASE("certification soundness: random points in included cubes satisfy |f_i| >= bound") {
  const auto sys = testing::coron_system();
  const auto params = params_with(0.5, {8});
  const CubicalComplex complex = build_sigma_complex(sys, params, 8);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, complex.top_cubes.size() - 1);
  const double w = complex.grid.cell_width();
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t c = pick(rng);
    std::array<int, kMaxDim> idx{};
    unpack_cell(complex.top_cubes[c], 4, idx.data());
    Eigen::VectorXd p(4);
    for (int a = 0; a < 4; ++a) p[a] = complex.grid.vertex(idx[a]) + w * u01(rng);
    const auto& cert = complex.certificates[c];
    const double fi = eval_point(sys.components[cert.component], p.head(3), p.tail(1));
    REQUIRE(std::abs(fi) >= cert.bound);
    REQUIRE(fi * cert.sign > 0.0);
  }
}

TEST_CASE("monotonicity: refinement keeps every certified region") {
  const auto sys = testing::coron_system();
  const auto params = params_with(0.5, {8, 16});
  const auto complexes = neighborhood_filtration(sys, params);
  // every child of an included cube at resolution 8 is included at 16
  std::array<int, kMaxDim> idx{};
  for (const CellKey cube : complexes[0].top_cubes) {
    unpack_cell(cube, 4, idx.data());
    std::array<int, kMaxDim> child{};
    for (int corner = 0; corner < 16; ++corner) {
      for (int a = 0; a < 4; ++a) {
        child[a] = 2 * idx[a] + ((corner >> a) & 1);
      }
      CAPTURE(corner);
      REQUIRE(complexes[1].contains_cube(pack_cell({child.data(), 4})));
    }
  }
}

TEST_CASE("origin cubes are never certified") {
  for (const auto& sys :
       {testing::identity_system(2, 0), testing::coron_system(),
        testing::brockett_integrator()}) {
    const int d = sys.n + sys.m;
    const auto params = params_with(0.5, {4});
    const CubicalComplex complex = build_sigma_complex(sys, params, 4);
    // all 2^d cubes incident to the origin
    std::array<int, kMaxDim> idx{};
    for (int corner = 0; corner < (1 << d); ++corner) {
      for (int a = 0; a < d; ++a) idx[a] = 1 + ((corner >> a) & 1);
      CHECK_FALSE(complex.contains_cube(
          pack_cell({idx.data(), static_cast<std::size_t>(d)})));
    }
  }
}

TEST_CASE("expression domain errors name the offending cube") {
  VectorFieldSystem sys;
  sys.name = "rooted";
  sys.n = 1;
  sys.m = 0;
  sys.components = {parse("sqrt(x1)", 1, 0)};
  const auto params = params_with(0.5, {4});
  try {
    build_sigma_complex(sys, params, 4);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("cube (") != std::string::npos);
  }
}

TEST_CASE("determinism: identical inputs give identical cube sets") {
  const auto sys = testing::coron_system();
  const auto params = params_with(0.5, {8});
  const CubicalComplex a = build_sigma_complex(sys, params, 8);
  const CubicalComplex b = build_sigma_complex(sys, params, 8);
  CHECK(a.top_cubes == b.top_cubes);
}

TEST_CASE("point membership honors shared faces") {
  const auto sys = testing::identity_system(2, 0);
  const auto params = params_with(1.0, {8});
  const CubicalComplex complex = build_sigma_complex(sys, params, 8);
  CHECK(complex.contains_point(vec2(0.5, 0.5)));
  CHECK(complex.contains_point(vec2(0.25, 0.0)));   // on a grid line
  CHECK_FALSE(complex.contains_point(vec2(0.0, 0.0)));
  CHECK_FALSE(complex.contains_point(vec2(1.5, 0.0)));  // outside the box
}

TEST_CASE("identity image covers a ball, integrator leaves the axis uncovered") {
  // identity: samples of f fill the box uniformly
  const auto id = testing::identity_system(2, 0);
  auto params = params_with(1.0, {8});
  const Eigen::MatrixXd img = sample_image(id, params, 8, 8);
  CHECK(img.cols() == 64 * 8);
  // every image point equals its sample point, so the box is filled; check
  // spread reaches all four quadrants
  CHECK(img.row(0).minCoeff() < -0.8);
  CHECK(img.row(0).maxCoeff() > 0.8);

  // Brockett integrator: u1 = u2 = 0 forces f3 = 0, so |f3| <= eps*(|u1|+|u2|)
  // for every sample; image cells on the x3 axis away from the origin can
  // never be covered.
  const auto br = testing::brockett_integrator();
  auto bparams = params_with(0.5, {4});
  const Eigen::MatrixXd bimg = sample_image(br, bparams, 4, 8);
  for (Eigen::Index c = 0; c < bimg.cols(); ++c) {
    const double bound = 0.5 * (std::abs(bimg(0, c)) + std::abs(bimg(1, c)));
    REQUIRE(std::abs(bimg(2, c)) <= bound + 1e-12);
  }
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  const auto sys = testing::identity_system(2, 0);
  auto params = params_with(1.0, {8});
  const Eigen::MatrixXd a = sample_image(sys, params, 8, 4);
  const Eigen::MatrixXd b = sample_image(sys, params, 8, 4);
  CHECK(a == b);
  params.seed = 2;
  const Eigen::MatrixXd c = sample_image(sys, params, 8, 4);
  CHECK(a != c);
}
