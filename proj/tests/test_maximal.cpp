#include <cmath>

#include "doctest.h"
#include "tanglab/counterexamples.hpp"
#include "tanglab/maximal.hpp"

using namespace tanglab;

namespace {

BandlimitedField annulus(double R, std::uint64_t seed) {
  FieldRecipe r;
  r.kind = RecipeKind::random_annulus;
  r.dim = 1;
  r.R = R;
  r.resolution = 8.0;
  r.seed = seed;
  return make_field(r);
}

}  // namespace

TEST_SUITE("maximal") {
  TEST_CASE("maximal function dominates the initial data") {
    const auto f = annulus(8.0, 3);
    GridSpec g;
    g.radius = 1.0;
    g.dx = 1.0 / 32;
    g.T = 0.05;
    const auto xs = g.points();
    const auto v0 = evaluate_field(f, xs);
    const auto M = maximal_function(f, SymbolSpec::paraboloid(), CurveSpec::power_shift({1.0, 0.0}, 0.5), g);
    REQUIRE(M.refined.size() == xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(M.refined[i] >= std::abs(v0[i]) * (1 - 1e-12));
      CHECK(M.refined[i] >= M.coarse[i] * (1 - 1e-12));
      CHECK(M.refined[i] <= f.l1_mass() * (1 + 1e-12));
    }
  }

  TEST_CASE("discrete Lp norm of a constant") {
    GridSpec g;
    g.radius = 1.0;
    g.dx = 1.0 / 64;
    const std::vector<double> ones(g.points().size(), 3.0);
    const double measure = ones.size() * g.cell();
    CHECK(measure == doctest::Approx(2.0).epsilon(0.02));
    CHECK(lp_norm(ones, 2.0, g) == doctest::Approx(3.0 * std::sqrt(measure)));
  }

  TEST_CASE("coarse grids are rejected") {
    const auto f = annulus(64.0, 1);
    GridSpec g;
    g.dx = 0.1;
    CHECK_THROWS_AS(validate_grid(g, f), ConfigError);
  }

  TEST_CASE("operator ratio is scale-free in the amplitude") {
    const auto f = annulus(8.0, 5);
    std::vector<FrequencyAtom> doubled = f.atoms();
    for (auto& a : doubled) a.c *= 2.0;
    const BandlimitedField g(1, doubled, f.provenance());
    GridSpec grid;
    grid.dx = 1.0 / 32;
    grid.T = 0.05;
    const auto P = SymbolSpec::paraboloid();
    const auto c = CurveSpec::vertical();
    CHECK(operator_ratio(f, P, c, grid, 2.0, 0.25) == doctest::Approx(operator_ratio(g, P, c, grid, 2.0, 0.25)));
  }

  TEST_CASE("exponent fit of synthetic ratios") {
    std::vector<double> lam, a, b;
    for (int j = 5; j < 11; ++j) {
      lam.push_back(std::ldexp(1.0, j));
      a.push_back(std::pow(lam.back(), 0.25));
      b.push_back(3.0 * std::sqrt(lam.back()));
    }
    CHECK(std::abs(exponent_fit(lam, a).slope - 0.25) < 1e-6);
    const auto fb = exponent_fit(lam, b);
    CHECK(std::abs(fb.slope - 0.5) < 1e-6);
    CHECK(fb.intercept == doctest::Approx(std::log2(3.0)));
    b[2] = 0.0;
    CHECK_THROWS_AS(exponent_fit(lam, b), ConfigError);
  }

  TEST_CASE("battery envelope is the pointwise maximum") {
    const std::vector<double> lams{16, 32, 64, 128};
    const auto P = SymbolSpec::paraboloid();
    const auto curve = CurveSpec::power_shift({1.0, 0.0}, 0.5);
    BatteryOptions o;
    o.names = {"cube"};
    const auto one = battery_scan(P, curve, 2.0, 0.0, lams, witness_battery(o));
    CHECK(one.envelope == one.ratios[0]);
    o.names = {"cube", "half-scale"};
    const auto two = battery_scan(P, curve, 2.0, 0.0, lams, witness_battery(o));
    for (std::size_t i = 0; i < lams.size(); ++i) {
      CHECK(two.envelope[i] >= one.envelope[i]);
      CHECK(two.envelope[i] == std::max(two.ratios[0][i], two.ratios[1][i]));
    }
    CHECK_THROWS_AS(battery_scan(P, curve, 2.0, 0.0, lams, {}), ConfigError);
  }

  TEST_CASE("operator ratio is nonincreasing in s") {
    const auto f = annulus(8.0, 7);
    GridSpec g;
    g.dx = 1.0 / 32;
    g.T = 0.05;
    double prev = INFINITY;
    for (double s : {-0.5, 0.0, 0.25, 0.5, 1.0}) {
      const double r = operator_ratio(f, SymbolSpec::paraboloid(), CurveSpec::vertical(), g, 2.0, s);
      CHECK(r <= prev);
      prev = r;
    }
  }

  TEST_CASE("family supremum dominates each member") {
    const auto f = annulus(8.0, 2);
    GridSpec g;
    g.dx = 1.0 / 32;
    g.T = 0.05;
    g.thetas = {0.5, 0.75, 1.0};
    const auto fam = CurveFamily::theta_power(0.5, ThetaSet::interval(0.5, 1.0));
    const auto all = maximal_function(f, SymbolSpec::paraboloid(), fam, g);
    for (double th : g.thetas) {
      const auto one = maximal_function(f, SymbolSpec::paraboloid(), CurveSpec::power_shift({th, 0.0}, 0.5), g);
      for (std::size_t i = 0; i < one.refined.size(); ++i) CHECK(all.refined[i] >= one.refined[i] * (1 - 1e-12));
    }
  }

  TEST_CASE("battery reaches the quarter threshold at p = 4") {
    std::vector<double> lams{32, 64, 128, 256};
    BatteryOptions o;
    o.names = {"cube-wide", "ball"};
    const auto r = battery_scan(SymbolSpec::paraboloid(), CurveSpec::power_shift({1.0, 0.0}, 0.5), 4.0, 0.0, lams,
                                witness_battery(o), 0.25);
    CHECK(r.envelope_fit.slope >= 0.25 - 0.1);
    CHECK(r.flagged.empty());
  }

  TEST_CASE("battery reaches 1/2 - alpha at alpha = 0.2") {
    std::vector<double> lams{32, 64, 128, 256};
    BatteryOptions o;
    o.names = {"cube-wide", "ball"};
    const auto r = battery_scan(SymbolSpec::paraboloid(), CurveSpec::power_shift({1.0, 0.0}, 0.2), 2.0, 0.0, lams,
                                witness_battery(o), 0.3);
    double best = -INFINITY;
    for (const auto& f : r.fits) best = std::max(best, f.slope);
    MESSAGE("envelope slope " << r.envelope_fit.slope << ", best witness slope " << best);
    CHECK(best >= 0.3 - 0.1);
    CHECK(r.flagged.empty());
  }

  TEST_CASE("sup-Lp norm is stable under grid refinement") {
    BatteryOptions o;
    o.names = {"cube-wide", "half-scale", "ball"};
    const auto P = SymbolSpec::paraboloid();
    const auto curve = CurveSpec::power_shift({1.0, 0.0}, 0.5);
    for (const auto& w : witness_battery(o)) {
      const auto f = w.field(64.0);
      auto g = w.grid(64.0);
      const double coarse = lp_norm(maximal_function(f, P, curve, g).refined, 2.0, g);
      g.dx /= 2;
      g.steps *= 2;
      const double fine = lp_norm(maximal_function(f, P, curve, g).refined, 2.0, g);
      CHECK(std::abs(fine - coarse) <= 0.02 * coarse);
    }
  }
}
