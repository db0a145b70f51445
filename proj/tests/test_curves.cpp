#include <cmath>

#include "doctest.h"
#include "tanglab/curves.hpp"

using namespace tanglab;

TEST_SUITE("curves") {
  TEST_CASE("power shift evaluation and anchoring") {
    const auto c = CurveSpec::power_shift({0.6, -0.8}, 0.5);
    CHECK(c.C_alpha == doctest::Approx(1.0));
    const Vec g = eval_curve(c, {1.0, 2.0}, 0.25);
    CHECK(g[0] == doctest::Approx(1.3));
    CHECK(g[1] == doctest::Approx(1.6));
    const Vec g0 = eval_curve(c, {1.0, 2.0}, 0.0);
    CHECK(g0[0] == 1.0);
    CHECK(g0[1] == 2.0);
    const Vec v = eval_curve(CurveSpec::vertical(), {0.4, 0.1}, 0.9);
    CHECK(v[0] == 0.4);
  }

  TEST_CASE("sampled conditions hold for the power shift") {
    for (double alpha : {0.1, 0.25, 0.5, 0.75, 0.99}) {
      const auto rep = verify_conditions(CurveSpec::power_shift({0.8, 0.3}, alpha), 500, 3);
      CHECK(rep.pass);
      REQUIRE(rep.find("anchoring"));
      CHECK(rep.find("anchoring")->worst == 0.0);
    }
  }

  TEST_CASE("an understated Hoelder constant is caught") {
    const auto rep = verify_conditions(CurveSpec::power_shift({1.0, 0.0}, 0.5, 0.5), 500, 3);
    CHECK_FALSE(rep.pass);
  }

  TEST_CASE("a curve that moves at t = 0 fails anchoring") {
    const auto c = CurveSpec::general([](const Vec& x, double t) { return Vec{x[0] + 0.1 + t, x[1]}; }, 1.0, 2.0);
    const auto rep = verify_conditions(c, 200, 1);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.find("anchoring")->pass);
  }

  TEST_CASE("theta-power family constants") {
    const auto fam = CurveFamily::theta_power(0.5, ThetaSet::interval(0.5, 1.0));
    CHECK(eval_curve(fam, 0.2, 0.25, 0.8) == doctest::Approx(0.6));
    const auto rep = verify_conditions(fam, 500, 4);
    CHECK(rep.pass);
    CHECK(rep.find("C2")->worst <= 1.0 + 1e-12);
  }

  TEST_CASE("invalid specs") {
    CHECK_THROWS(CurveSpec::power_shift({1.0, 0.0}, 1.5).validate());
    CHECK_THROWS(CurveSpec::power_shift({1.0, 0.0}, 0.0).validate());
  }

  TEST_CASE("worst Hoelder quotient of a power shift is |mu|") {
    for (double alpha : {0.25, 0.5, 0.75}) {
      const auto rep = verify_conditions(CurveSpec::power_shift({0.6, 0.8}, alpha), 1000, 9);
      REQUIRE(rep.find("holder"));
      CHECK(rep.find("holder")->worst == doctest::Approx(1.0).epsilon(0.02));
    }
  }
}
