#include <cmath>

#include "doctest.h"
#include "tanglab/rate.hpp"

using namespace tanglab;

TEST_SUITE("rate") {
  TEST_CASE("dyadic schedule") {
    const auto ts = dyadic_times(3, 6);
    REQUIRE(ts.size() == 4);
    CHECK(ts.front() == 0.125);
    CHECK(ts.back() == 1.0 / 64);
  }

  TEST_CASE("regions") {
    CHECK(region_for(2.0, 0.5) == Region::D1);
    CHECK(region_for(2.0, 0.4) == Region::D2);
    CHECK(in_region(Region::D1, 0.5, 0.25, 2.0, 0.6));
    CHECK_FALSE(in_region(Region::D1, 0.5, 0.26, 2.0, 0.6));
    CHECK_FALSE(in_region(Region::D1, 2.0, 0.6, 2.0, 0.6));  // h < alpha is strict
    CHECK(in_region(Region::D2, 0.5, 0.15, 2.0, 0.3));
    CHECK_FALSE(in_region(Region::D2, 0.5, 0.16, 2.0, 0.3));
  }

  TEST_CASE("trend test on synthetic profiles") {
    std::vector<RatePoint> down, flat;
    for (int j = 0; j < 10; ++j) {
      down.push_back({std::ldexp(1.0, -j), std::ldexp(1.0, -j)});
      flat.push_back({std::ldexp(1.0, -j), 1.0});
    }
    CHECK(trend_test(down).pass);
    CHECK(trend_test(down).final_over_initial == doctest::Approx(std::ldexp(1.0, -9)));
    CHECK_FALSE(trend_test(flat).pass);
  }

  TEST_CASE("rate quotient vanishes at interior points") {
    FieldRecipe r;
    r.kind = RecipeKind::sobolev_random;
    r.R = 16.0;
    r.decay = 0.75;
    r.seed = 2;
    const auto f = make_field(r);
    GridSpec ball;
    ball.dx = 1.0 / 32;
    const auto prof = rate_profile(f, SymbolSpec::modulus_power(2.0), CurveSpec::power_shift({-1.0, 0.0}, 0.6), 0.2,
                                   ball, dyadic_times(8, 18));
    CHECK(trend_test(prof).pass);
  }

  TEST_CASE("boundary exponent keeps the quotient away from zero") {
    GridSpec g;
    g.radius = 2.0;
    g.dx = 1.0 / 32;
    const auto b = boundary_obstruction(0.5, dyadic_times(4, 16), g);
    CHECK(b.pass);
    CHECK(b.min_ratio >= 0.5 * b.sup_derivative);
  }

  TEST_CASE("rate exponent rescales exactly and commutes with scalars") {
    FieldRecipe r;
    r.kind = RecipeKind::sobolev_random;
    r.R = 8.0;
    r.decay = 0.5;
    r.seed = 4;
    const auto f = make_field(r);
    GridSpec ball;
    ball.dx = 1.0 / 16;
    const auto P = SymbolSpec::modulus_power(2.0);
    const auto curve = CurveSpec::power_shift({-1.0, 0.0}, 0.5);
    const auto ts = dyadic_times(6, 12);
    const auto a = rate_profile(f, P, curve, 0.1, ball, ts);
    const auto b = rate_profile(f, P, curve, 0.35, ball, ts);
    std::vector<FrequencyAtom> scaled = f.atoms();
    for (auto& x : scaled) x.c *= cplx(-2.0, 1.5);
    const auto c = rate_profile(BandlimitedField(1, scaled, f.provenance()), P, curve, 0.5, ball, ts);
    const auto d = rate_profile(f, P, curve, 0.5, ball, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(b[i].ratio == doctest::Approx(a[i].ratio * std::pow(ts[i], 0.1 - 0.35)).epsilon(1e-12));
      CHECK(c[i].ratio == doctest::Approx(2.5 * d[i].ratio).epsilon(1e-10));
    }
  }
}
