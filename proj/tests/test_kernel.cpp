#include <cmath>
#include <random>

#include "doctest.h"
#include "tanglab/kernel.hpp"

using namespace tanglab;

TEST_SUITE("kernel") {
  TEST_CASE("cutoff is one on the annulus") {
    const Cutoff phi;
    for (double e : {0.5, 0.7, 1.0, 1.5, 2.0, -0.6, -1.9}) CHECK(phi(e) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(phi(0.0) < 1e-16);
    CHECK(phi(3.0) < 1e-16);
    // Each centre carries mass spacing = weight * sqrt(2 pi) sigma; mirrored on eta < 0.
    const double spacing = phi.center_weight() * std::sqrt(2 * M_PI) * phi.sigma;
    CHECK(phi.mass() == doctest::Approx(2.0 * phi.centers().size() * spacing).epsilon(1e-12));
  }

  TEST_CASE("analytic kernel agrees with quadrature") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int i = 0; i < 30; ++i) {
      const KernelArgs a{U(rng) * 0.05, U(rng) * 1e-3, 128.0};
      const cplx q = kernel_quadrature(a), e = kernel_analytic(a);
      CHECK(std::abs(q - e) <= 1e-9 * 128.0 * 3.0);
    }
  }

  TEST_CASE("kernel at the origin is lambda times the cutoff mass") {
    const KernelArgs a{0.0, 0.0, 256.0};
    CHECK(std::abs(kernel_analytic(a) - cplx(256.0 * Cutoff{}.mass(), 0.0)) < 1e-9);
  }

  TEST_CASE("envelope branches and their crossover") {
    CHECK(e3_envelope(256.0, 0.5, 1.0 / 64) == doctest::Approx(std::max(16.0 * 8.0, 64.0)));
    for (double alpha : {0.3, 0.5, 0.8}) {
      const auto c = envelope_crossover(256.0, alpha);
      CHECK(c.analytic == doctest::Approx(std::pow(256.0, -alpha / (1 - alpha))));
      CHECK(c.numeric == doctest::Approx(c.analytic).epsilon(1e-6));
    }
  }

  TEST_CASE("stationary line decays like tau^-1/2") {
    std::vector<double> taus;
    for (int j = 13; j >= 8; --j) taus.push_back(std::ldexp(1.0, -j));
    const auto fit = stationary_sweep(256.0, taus);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.1));
  }

  TEST_CASE("envelope check on a small sample") {
    EnvelopeConfig cfg;
    cfg.samples = 20;
    cfg.lambda = 128.0;
    const auto rep = envelope_check(cfg);
    CHECK(rep.e1_worst <= 1.0);
    CHECK(rep.e2_pass);
    CHECK(rep.e3_drift < 0.03);
    for (const auto& row : rep.rows) CHECK(row.modulus <= rep.e1_bound * (1 + 1e-12));
  }
}
