#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stabcheck/interval.hpp"

using namespace stabcheck;

TEST_CASE("basic arithmetic encloses exact ranges") {
  const Interval a{0.0, 1.0}, b{-1.0, 1.0};
  const Interval prod = a * b;
  CHECK(prod.lo <= -1.0);
  CHECK(prod.hi >= 1.0);
  CHECK(prod.width() < 2.0 + 1e-12);

  const Interval sum = a + b;
  CHECK(sum.contains(-1.0));
  CHECK(sum.contains(2.0));

  const Interval diff = a - b;
  CHECK(diff.contains(-1.0));
  CHECK(diff.contains(2.0));
}

TEST_CASE("even power tightening keeps the lower bound at exactly zero") {
  const Interval x{-1.0, 1.0};
  const Interval sq = pow_int(x, 2);
  CHECK(sq.lo == 0.0);
  CHECK(sq.hi >= 1.0);
  // dense sampling of the box stays inside
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double v = u(rng);
    CHECK(sq.contains(v * v));
  }
}

TEST_CASE("odd powers and negative bases") {
  const Interval x{-2.0, 3.0};
  const Interval cube = pow_int(x, 3);
  CHECK(cube.contains(-8.0));
  CHECK(cube.contains(27.0));
  const Interval neg{-3.0, -2.0};
  const Interval sq = pow_int(neg, 2);
  CHECK(sq.contains(4.0));
  CHECK(sq.contains(9.0));
  CHECK(sq.lo > 0.0);
}

TEST_CASE("division by a zero-straddling interval is a hard error") {
  const Interval num{1.0, 2.0};
  CHECK_THROWS_AS(num / Interval(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(num / Interval(0.0, 1.0), DomainError);
  const Interval ok = num / Interval{2.0, 4.0};
  CHECK(ok.contains(0.25));
  CHECK(ok.contains(1.0));
}

TEST_CASE("sqrt domain handling") {
  CHECK_THROWS_AS(sqrt_i(Interval(-1.0, 1.0)), DomainError);
  const Interval r = sqrt_i(Interval{0.0, 4.0});
  CHECK(r.lo == 0.0);
  CHECK(r.contains(2.0));
}

TEST_CASE("abs of a straddling interval attains zero exactly") {
  const Interval r = abs_i(Interval{-3.0, 2.0});
  CHECK(r.lo == 0.0);
  CHECK(r.hi >= 3.0);
}

TEST_CASE("sin and cos ranges include interior extrema") {
  const Interval r = sin_i(Interval{0.0, 3.2});
  CHECK(r.hi == 1.0);  // peak at pi/2 inside, clamped
  CHECK(r.lo <= std::sin(3.2) + 1e-12);
  const Interval c = cos_i(Interval{3.0, 3.3});
  CHECK(c.lo == -1.0);  // trough at pi inside
  const Interval full = sin_i(Interval{0.0, 10.0});
  CHECK(full.lo == -1.0);
  CHECK(full.hi == 1.0);
}

TEST_CASE("single primitive on degenerate intervals has width <= 4 ulps") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng), b = u(rng);
    const Interval ia{a, a}, ib{b, b};
    for (const Interval r :
         {ia + ib, ia - ib, ia * ib, sin_i(ia), cos_i(ia), exp_i(Interval{
              std::fmod(a, 3.0), std::fmod(a, 3.0)})}) {
      const double ulp = std::nextafter(std::abs(r.hi), 1e308) - std::abs(r.hi);
      CHECK(r.width() <= 4.5 * std::max(ulp, 5e-324));
    }
  }
}

TEST_CASE("soundness: sampled values always land inside interval results") {
  std::mt19937_64 rng(123);
  int tested = 0;
  while (tested < 1000) {
    const Expression e = testing::random_expression(rng, 2, 1);
    const auto box = testing::random_box(rng, 3);
    Interval enclosure;
    try {
      enclosure = eval_interval(e, box, 2, 1);
    } catch (const DomainError&) {
      continue;  // partial op on this box; resample
    }
    for (int s = 0; s < 10; ++s) {
      const Eigen::VectorXd p = testing::random_point_in_box(rng, box);
      double v;
      try {
        v = eval_point(e, p.head(2), p.tail(1));
      } catch (const DomainError&) {
        continue;
      }
      REQUIRE(enclosure.contains(v));
    }
    ++tested;
  }
}

TEST_CASE("monotonicity: sub-boxes give sub-intervals up to rounding") {
  std::mt19937_64 rng(99);
  int tested = 0;
  while (tested < 300) {
    const Expression e = testing::random_expression(rng, 2, 0);
    auto box = testing::random_box(rng, 2);
    auto sub = box;
    for (auto& iv : sub) {
      const double q = 0.25 * (iv.hi - iv.lo);
      iv = Interval{iv.lo + q, iv.hi - q};
    }
    Interval big, small;
    try {
      big = eval_interval(e, box, 2, 0);
      small = eval_interval(e, sub, 2, 0);
    } catch (const DomainError&) {
      continue;
    }
    const double slack = 1e-9 * (1.0 + big.mag());
    CHECK(small.lo >= big.lo - slack);
    CHECK(small.hi <= big.hi + slack);
    ++tested;
  }
}

TEST_CASE("point evaluation agrees with degenerate interval evaluation") {
  std::mt19937_64 rng(5);
  int tested = 0;
  while (tested < 500) {
    const Expression e = testing::random_expression(rng, 2, 1, 5);
    const Eigen::VectorXd p = Eigen::VectorXd::Random(3) * 2.0;
    double v;
    std::vector<Interval> box{Interval{p[0], p[0]}, Interval{p[1], p[1]},
                              Interval{p[2], p[2]}};
    try {
      v = eval_point(e, p.head(2), p.tail(1));
      const Interval r = eval_interval(e, box, 2, 1);
      CHECK(r.contains(v));
    } catch (const DomainError&) {
      continue;
    }
    ++tested;
  }
}
