#include <cmath>
#include <random>

#include "doctest.h"
#include "tanglab/parallel.hpp"
#include "tanglab/propagator.hpp"

using namespace tanglab;

namespace {

BandlimitedField annulus(int dim, double R, std::uint64_t seed) {
  FieldRecipe r;
  r.kind = RecipeKind::random_annulus;
  r.dim = dim;
  r.R = R;
  r.resolution = 8.0;
  r.seed = seed;
  return make_field(r);
}

}  // namespace

TEST_SUITE("propagator") {
  TEST_CASE("time zero is bitwise the field") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto f = annulus(2, 4.0, seed);
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> U(-1.0, 1.0);
      std::vector<Vec> xs;
      std::vector<SpaceTimePoint> pts;
      for (int i = 0; i < 40; ++i) {
        xs.push_back({U(rng), U(rng)});
        pts.push_back({xs.back(), 0.0});
      }
      const auto a = evaluate_field(f, xs);
      const auto b = evolve(f, SymbolSpec::paraboloid(), pts);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(a[i].real() == b[i].real());
        CHECK(a[i].imag() == b[i].imag());
      }
    }
  }

  TEST_CASE("unit atom keeps unit modulus") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-50.0, 50.0);
    const auto P = SymbolSpec::modulus_power(3.0);
    for (int i = 0; i < 500; ++i) {
      const BandlimitedField f(2, {{{U(rng) / 10, U(rng) / 10}, 1.0, 1.0}});
      const double m = std::abs(evolve_one(f, P, {{U(rng), U(rng)}, std::abs(U(rng))}));
      CHECK(std::abs(m - 1.0) <= std::numeric_limits<double>::epsilon());
    }
  }

  TEST_CASE("gaussian evolves by the closed form") {
    // f^ = exp(-xi^2): e^{it d^2} f(x) = sqrt(pi / A) exp(-x^2 / (4 A)), A = 1 - it.
    FieldRecipe r;
    r.kind = RecipeKind::gaussian;
    r.sigma = 1.0;
    r.extent = 8.0;
    r.resolution = 16.0;
    const auto f = make_field(r);
    const cplx v = evolve_one(f, SymbolSpec::paraboloid(), {{0.7, 0.0}, 0.3});
    const cplx want(1.5405640279110722, 0.17328824022015812);
    CHECK(std::abs(v - want) < 1e-12);
  }

  TEST_CASE("results do not depend on the worker count") {
    const auto f = annulus(2, 6.0, 9);
    std::vector<SpaceTimePoint> pts;
    for (int i = 0; i < 257; ++i) pts.push_back({{0.004 * i, -0.003 * i}, 0.0005 * i});
    set_worker_count(1);
    const auto a = evolve(f, SymbolSpec::paraboloid(), pts);
    set_worker_count(4);
    const auto b = evolve(f, SymbolSpec::paraboloid(), pts);
    set_worker_count(0);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(a[i] == b[i]);
  }

  TEST_CASE("curve evaluation matches pointwise evolution") {
    const auto f = annulus(1, 4.0, 4);
    const auto curve = CurveSpec::power_shift({0.5, 0.0}, 0.5);
    const std::vector<Vec> xs{{-0.3, 0.0}, {0.2, 0.0}};
    const std::vector<double> ts{0.0, 0.01, 0.04};
    const auto M = evolve_along_curve(f, SymbolSpec::paraboloid(), curve, xs, ts);
    REQUIRE(M.rows == 2);
    REQUIRE(M.cols == 3);
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < ts.size(); ++j) {
        const Vec g = eval_curve(curve, xs[i], ts[j]);
        const cplx v = evolve_one(f, SymbolSpec::paraboloid(), {g, ts[j]});
        CHECK(std::abs(M(i, j) - v) < 1e-13 * f.l1_mass());
      }
  }

  TEST_CASE("lattice tail bounds the omitted sum") {
    for (int n : {1, 2})
      for (int L : {1, 2, 4, 8}) {
        const double q = n + 1.0;
        double exact = 0.0;
        const int K = 4000 / (n == 2 ? 20 : 1);
        if (n == 1) {
          for (int l = L + 1; l <= K; ++l) exact += 2 * std::pow(1.0 + l, -q);
        } else {
          for (int a = -K; a <= K; ++a)
            for (int b = -K; b <= K; ++b)
              if (std::max(std::abs(a), std::abs(b)) > L) exact += std::pow(1.0 + std::hypot(a, b), -q);
        }
        CHECK(lattice_tail(n, q, L) >= exact);
      }
  }

  TEST_CASE("mean value bounds in time and space") {
    const auto f = annulus(2, 6.0, 17);
    const auto P = SymbolSpec::paraboloid();
    double tsum = 0.0, xsum = 0.0;
    for (const auto& a : f.atoms()) {
      tsum += a.w * std::abs(a.c) * std::abs(P(a.xi));
      xsum += a.w * std::abs(a.c) * norm(a.xi);
    }
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const Vec x{U(rng) - 0.5, U(rng) - 0.5};
      const double t = 0.05 * U(rng), t2 = 0.05 * U(rng);
      const Vec x2{x[0] + 0.01 * U(rng), x[1] - 0.01 * U(rng)};
      const cplx a = evolve_one(f, P, {x, t});
      CHECK(std::abs(a - evolve_one(f, P, {x, t2})) <= std::abs(t - t2) * tsum + 1e-12);
      CHECK(std::abs(a - evolve_one(f, P, {x2, t})) <= norm({x2[0] - x[0], x2[1] - x[1]}) * xsum + 1e-12);
    }
  }
}
