#include <cmath>
#include <random>

#include "doctest.h"
#include "tanglab/fit.hpp"
#include "tanglab/types.hpp"

using namespace tanglab;

TEST_SUITE("fit") {
  TEST_CASE("least squares recovers an exact line") {
    const std::vector<double> x{0, 1, 2, 3, 4}, y{1, 3, 5, 7, 9};
    const auto f = least_squares(x, y);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK(f.stderr_slope < 1e-12);
  }

  TEST_CASE("log-log slope of random power laws") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
      const double e = U(rng), c = std::exp(U(rng));
      std::vector<double> s, v;
      for (int j = 4; j < 10; ++j) {
        s.push_back(std::ldexp(1.0, j));
        v.push_back(c * std::pow(s.back(), e));
      }
      const auto f = fit_loglog(s, v);
      CHECK(f.slope == doctest::Approx(e).epsilon(1e-10));
      CHECK(std::exp2(f.intercept) == doctest::Approx(c).epsilon(1e-9));
    }
  }

  TEST_CASE("rejects short or unordered schedules") {
    CHECK_THROWS(fit_loglog({1, 2, 4}, {1, 2, 3}));
    CHECK_THROWS(fit_loglog({1, 4, 2, 8}, {1, 2, 3, 4}));
    CHECK_THROWS(fit_loglog({1, 2, 4, 8}, {1, 0, 3, 4}));
  }
}
