#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "tanglab/spectral.hpp"

using namespace tanglab;

namespace {

FieldRecipe gaussian(int dim, double sigma, double extent, double resolution) {
  FieldRecipe r;
  r.kind = RecipeKind::gaussian;
  r.dim = dim;
  r.sigma = sigma;
  r.extent = extent;
  r.resolution = resolution;
  return r;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("single atom is a plane wave") {
    const BandlimitedField f(2, {{{1.5, -0.5}, 2.0, {0.0, 1.0}}});
    const auto v = evaluate_field(f, {{0.3, 0.7}});
    const cplx want = 2.0 * cplx(0.0, 1.0) * std::exp(cplx(0.0, 1.5 * 0.3 - 0.5 * 0.7));
    CHECK(std::abs(v[0] - want) < 1e-15);
    CHECK(f.band() == doctest::Approx(std::hypot(1.5, 0.5)));
    CHECK(f.l1_mass() == doctest::Approx(2.0));
  }

  TEST_CASE("gaussian recipe matches its Fourier transform") {
    // f^ = exp(-xi^2), so f(x) = sqrt(pi) exp(-x^2 / 4).
    const auto f = make_field(gaussian(1, 1.0, 8.0, 16.0));
    for (double x : {0.0, 0.5, 1.0, 2.5}) {
      const auto v = evaluate_field(f, {{x, 0.0}});
      CHECK(std::abs(v[0] - std::sqrt(M_PI) * std::exp(-x * x / 4)) < 1e-12);
    }
  }

  TEST_CASE("littlewood-paley pieces sum back to the field") {
    FieldRecipe r;
    r.kind = RecipeKind::sobolev_random;
    r.dim = 2;
    r.R = 12.0;
    r.resolution = 2.0;
    r.seed = 5;
    const auto f = make_field(r);
    const auto pieces = littlewood_paley_split(f);
    CHECK(pieces.size() >= 3);
    std::vector<Vec> pts{{0.1, 0.2}, {-0.4, 0.9}, {1.3, -0.2}};
    const auto whole = evaluate_field(f, pts);
    std::vector<cplx> sum(pts.size());
    std::size_t atoms = 0;
    for (const auto& p : pieces) {
      atoms += p.size();
      const auto v = evaluate_field(p, pts);
      for (std::size_t i = 0; i < pts.size(); ++i) sum[i] += v[i];
    }
    CHECK(atoms == f.size());
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(sum[i] - whole[i]) < 1e-10 * f.l1_mass());
  }

  TEST_CASE("dyadic index at and around powers of two") {
    CHECK(dyadic_index(0.0) == 0);
    CHECK(dyadic_index(1.99) == 0);
    for (int k = 1; k < 40; ++k) {
      CHECK(dyadic_index(std::ldexp(1.0, k)) == k);
      CHECK(dyadic_index(std::nextafter(std::ldexp(1.0, k), 0.0)) == k - 1);
    }
  }

  TEST_CASE("sobolev norm is monotone in the index") {
    FieldRecipe r;
    r.kind = RecipeKind::random_annulus;
    r.dim = 1;
    r.R = 8.0;
    r.seed = 2;
    const auto f = make_field(r);
    double prev = 0.0;
    for (double s : {-1.0, 0.0, 0.5, 1.0}) {
      const double n = sobolev_norm(f, {s});
      CHECK(n > prev);
      prev = n;
    }
    // Band in [R/2, R]: the weight (1+|xi|^2)^s lies between its endpoint values.
    const double n0 = sobolev_norm(f, {0.0}), n1 = sobolev_norm(f, {1.0});
    CHECK(n1 <= n0 * std::sqrt(1 + 64.0) * (1 + 1e-12));
    CHECK(n1 >= n0 * std::sqrt(1 + 16.0) * (1 - 1e-12));
  }

  TEST_CASE("resolution rule") {
    const auto f = make_field(gaussian(1, 1.0, 4.0, 8.0));
    const auto P = SymbolSpec::paraboloid();
    CHECK_NOTHROW(check_resolution(f, P, 1.0, 0.1));
    CHECK_THROWS_AS(check_resolution(f, P, 1.0, 10.0), ConfigError);
    CHECK(resolution_margin(f, P, 1.0, 0.1) > 0.0);
    // Discrete data is exempt.
    const BandlimitedField d(1, {{{100.0, 0.0}, 1.0, 1.0}});
    CHECK_NOTHROW(check_resolution(d, P, 1e6, 1e6));
  }

  TEST_CASE("recipe errors") {
    auto r = gaussian(3, 1.0, 4.0, 8.0);
    CHECK_THROWS_AS(make_field(r), ConfigError);
    r = gaussian(1, -1.0, 4.0, 8.0);
    CHECK_THROWS_AS(make_field(r), ConfigError);
    r = gaussian(1, 1.0, 4.0, 1.0);
    CHECK_THROWS_AS(make_field(r), ConfigError);
  }

  TEST_CASE("symbols") {
    CHECK(SymbolSpec::paraboloid()({3.0, 4.0}) == 25.0);
    CHECK(SymbolSpec::modulus_power(3.0)({3.0, 4.0}) == doctest::Approx(125.0));
    CHECK(SymbolSpec::first_coordinate_power(3.0)({-2.0, 7.0}) == doctest::Approx(-8.0));
    CHECK(SymbolSpec::first_coordinate_power(2.5)({-4.0, 0.0}) == doctest::Approx(32.0));
    CHECK(SymbolSpec::paraboloid().grad_sup(5.0) >= 10.0);
  }

  TEST_CASE("phase rotation preserves the s = 0 norm") {
    FieldRecipe r;
    r.kind = RecipeKind::random_annulus;
    r.dim = 2;
    r.R = 8.0;
    r.seed = 12;
    const auto f = make_field(r);
    const auto P = SymbolSpec::modulus_power(3.0);
    for (double t : {0.0, 0.01, 1.0, 123.456}) {
      std::vector<FrequencyAtom> rotated = f.atoms();
      for (auto& a : rotated) a.c *= std::polar(1.0, t * P(a.xi));
      const BandlimitedField g(2, rotated, f.provenance());
      const double n0 = sobolev_norm(f, {0.0}), n1 = sobolev_norm(g, {0.0});
      CHECK(std::abs(n1 - n0) <= f.size() * std::numeric_limits<double>::epsilon() * n0);
    }
  }

  TEST_CASE("littlewood-paley pieces are disjoint and split the norm") {
    FieldRecipe r;
    r.kind = RecipeKind::sobolev_random;
    r.dim = 1;
    r.R = 64.0;
    r.seed = 3;
    const auto f = make_field(r);
    const auto pieces = littlewood_paley_split(f);
    double sq = 0.0;
    std::vector<int> seen;
    for (const auto& p : pieces) {
      const int k = dyadic_index(norm(p.atoms().front().xi));
      for (const auto& a : p.atoms()) CHECK(dyadic_index(norm(a.xi)) == k);
      CHECK(std::find(seen.begin(), seen.end(), k) == seen.end());
      seen.push_back(k);
      sq += std::pow(sobolev_norm(p, {0.0}), 2);
    }
    const double total = std::pow(sobolev_norm(f, {0.0}), 2);
    CHECK(std::abs(sq - total) <= 1e-12 * total);
  }

  TEST_CASE("evaluation is linear") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<FrequencyAtom> fa, ga, sum;
      const cplx a(U(rng), U(rng)), b(U(rng), U(rng));
      for (int i = 0; i < 30; ++i) {
        const FrequencyAtom x{{4 * U(rng), 4 * U(rng)}, 0.1, {U(rng), U(rng)}};
        const FrequencyAtom y{{4 * U(rng), 4 * U(rng)}, 0.1, {U(rng), U(rng)}};
        fa.push_back(x);
        ga.push_back(y);
        sum.push_back({x.xi, x.w, a * x.c});
        sum.push_back({y.xi, y.w, b * y.c});
      }
      const BandlimitedField f(2, fa), g(2, ga), h(2, sum);
      const std::vector<Vec> pts{{U(rng), U(rng)}, {3 * U(rng), U(rng)}};
      const auto vf = evaluate_field(f, pts), vg = evaluate_field(g, pts), vh = evaluate_field(h, pts);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const cplx want = a * vf[i] + b * vg[i];
        CHECK(std::abs(vh[i] - want) <= 1e-10 * std::max(1.0, std::abs(want)));
      }
    }
  }
}
