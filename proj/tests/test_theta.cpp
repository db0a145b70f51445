#include <cmath>
#include <random>

#include "doctest.h"
#include "tanglab/theta.hpp"

using namespace tanglab;

TEST_SUITE("theta") {
  TEST_CASE("covers of simple sets") {
    CHECK(box_count(ThetaSet::finite({0.3}), 1e-3).N == 1);
    CHECK(box_count(ThetaSet::finite({0.0, 0.5, 1.0}), 0.1).N == 3);
    CHECK(box_count(ThetaSet::finite({0.0, 0.05}), 0.1).N == 1);
    for (int j = 2; j < 12; ++j) {
      const double d = std::ldexp(1.0, -j);
      const auto c = box_count(ThetaSet::interval(0.0, 1.0), d);
      CHECK(c.N >= (1u << j));
      CHECK(c.N <= (1u << j) + 1);
    }
  }

  TEST_CASE("greedy cover really covers") {
    const auto theta = ThetaSet::sequence();
    for (double d : {0.1, 0.01, 0.001}) {
      const auto c = box_count(theta, d);
      REQUIRE(c.centers.size() == c.N);
      for (double p : theta.generator_points(2000)) {
        bool hit = false;
        for (double x : c.centers) hit = hit || std::abs(p - x) <= d / 2 * (1 + 1e-12);
        CHECK(hit);
      }
    }
  }

  TEST_CASE("cover counts are monotone in delta") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> pts(300);
    for (auto& p : pts) p = U(rng);
    const auto theta = ThetaSet::finite(pts);
    std::size_t prev = 0;
    for (int j = 1; j < 16; ++j) {
      const auto n = box_count(theta, std::ldexp(1.0, -j)).N;
      CHECK(n >= prev);
      CHECK(n <= pts.size());
      prev = n;
    }
  }

  TEST_CASE("minkowski dimensions") {
    CHECK(minkowski_dim(ThetaSet::finite({0.25})).fit.slope == 0.0);
    CHECK(minkowski_dim(ThetaSet::interval(0.0, 1.0)).fit.slope == doctest::Approx(1.0).epsilon(0.02));
    CHECK(minkowski_dim(ThetaSet::sequence()).fit.slope == doctest::Approx(0.5).epsilon(0.2));
  }

  TEST_CASE("clip and membership") {
    const auto s = ThetaSet::sequence();
    CHECK(s.contains(0.5));
    CHECK(s.contains(1.0));
    CHECK(s.contains(0.5 + 1.0 / 3.0));
    CHECK_FALSE(s.contains(0.8));
    const auto c = s.clip(0.6, 0.9);
    CHECK(c.lo() >= 0.6);
    CHECK(c.hi() <= 0.9);
    CHECK_FALSE(c.contains(0.5));
    CHECK(ThetaSet::interval(0.0, 1.0).clip(2.0, 3.0).empty());
  }

  TEST_CASE("decomposition pieces are small and cover the set") {
    for (double alpha : {0.25, 0.5, 0.75}) {
      const double lambda = 256.0;
      const auto dec = theta_decompose(ThetaSet::interval(0.5, 1.0), lambda, alpha);
      const double mu = std::min(1.0, 2 * alpha);
      CHECK(dec.mu == doctest::Approx(mu));
      CHECK(dec.diameter == doctest::Approx(std::pow(lambda, -mu)));
      for (const auto& p : dec.pieces) CHECK(p.diameter() <= dec.diameter * (1 + 1e-12));
      for (double x : {0.5, 0.61, 0.777, 1.0}) {
        bool hit = false;
        for (const auto& p : dec.pieces) hit = hit || p.contains(x);
        CHECK(hit);
      }
    }
  }

  TEST_CASE("fitted dimension of random finite sets stays in range") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> pts(1 + trial * 37);
      for (auto& p : pts) p = U(rng);
      const auto d = minkowski_dim(ThetaSet::finite(pts), 14, 2);
      CHECK(d.fit.slope >= 0.0);
      CHECK(d.fit.slope <= 1.0 + d.fit.stderr_slope);
    }
  }
}
