#include <cmath>
#include <random>

#include "doctest.h"
#include "tanglab/wavepacket.hpp"

using namespace tanglab;

TEST_SUITE("wavepacket") {
  TEST_CASE("window periodization matches its Poisson series") {
    // a = 4, s = 2: sum_n exp(-(u - 4n)^2 / 4) at u = 0 and u = a/2.
    GaborSystem sys;
    sys.R = 16.0;
    CHECK(sys.G0(0.0) == doctest::Approx(1.0366315028478184).epsilon(1e-13));
    CHECK(sys.G0(2.0) == doctest::Approx(0.7360057019788337).epsilon(1e-13));
    const double ratio = std::pow(1.0366315028478184 / 0.7360057019788337, 2);
    const auto fb = frame_bounds(sys, 20000, 3);
    CHECK(fb.ratio() <= ratio * (1 + 1e-12));
    CHECK(fb.ratio() >= 0.99 * ratio);
  }

  TEST_CASE("decomposition reconstructs and respects the frame bounds") {
    FieldRecipe r;
    r.kind = RecipeKind::gaussian;
    r.dim = 2;
    r.sigma = 0.25;
    r.extent = 1.0;
    r.resolution = 16.0;
    const auto f = make_field(r);
    GaborSystem sys;
    sys.R = 16.0;
    const auto d = decompose(f, sys, 16.0);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-10.0, 10.0);
    std::vector<Vec> pts;
    for (int i = 0; i < 50; ++i) pts.push_back({U(rng), U(rng)});
    const auto rec = reconstruct(d, pts);
    const auto ex = evaluate_field(f, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(rec[i] - ex[i]) <= 1e-8 * std::abs(ex[0]) + 1e-10);
    const auto fb = frame_bounds(d.system, 4096, 1);
    const double e = d.coef_energy / (d.norm2 * d.norm2);
    CHECK(e >= fb.A * 0.999);
    CHECK(e <= fb.B * 1.001);
  }

  TEST_CASE("packet modulus at time zero is the window") {
    Tile t;
    t.R = 256.0;
    t.c_nu = {16.0, -32.0};
    const double s = 1.15 * 16.0;
    const double peak = packet_modulus(t, 1.15, t.c_nu, 0.0);
    const Vec off{t.c_nu[0] + s, t.c_nu[1]};
    CHECK(packet_modulus(t, 1.15, off, 0.0) / peak == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  }

  TEST_CASE("cell minimum over hand-built masks") {
    // Lines: 0 absorbs cap 0, 1 absorbs cap 1, 2 absorbs caps 0 and 2.
    const std::vector<double> v{5.0, 3.0, 1.0};
    const std::vector<std::vector<bool>> masks{{true, false, false}, {false, true, false}, {true, false, true}};
    CHECK(broad_cell_min(v, masks, 1) == 3.0);
    CHECK(broad_cell_min(v, masks, 2) == 0.0);
    const std::vector<std::vector<bool>> two{{true, false, false}, {false, true, false}};
    CHECK(broad_cell_min(v, two, 2) == 1.0);
    CHECK(broad_cell_min(v, {}, 2) == 5.0);
  }

  TEST_CASE("cell minimum is monotone in the number of lines") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t caps = 3 + trial % 6, lines = 2 + trial % 5;
      std::vector<double> v(caps);
      for (auto& x : v) x = U(rng);
      std::vector<std::vector<bool>> m(lines, std::vector<bool>(caps));
      for (auto& row : m)
        for (std::size_t c = 0; c < caps; ++c) row[c] = U(rng) < 0.35;
      double prev = INFINITY;
      for (int A = 1; A <= 4; ++A) {
        const double x = broad_cell_min(v, m, A);
        CHECK(x <= prev);
        CHECK(x <= *std::max_element(v.begin(), v.end()));
        prev = x;
      }
    }
  }

  TEST_CASE("broad norm is dominated and vanishes when every cap can be absorbed") {
    FieldRecipe r;
    r.kind = RecipeKind::random_annulus;
    r.dim = 2;
    r.R = 1.0;
    r.resolution = 32.0;
    r.seed = 3;
    const auto f = make_field(r);
    BroadParams p;
    BroadDomain d;
    d.R = 4.0;
    d.quad = 2;
    const auto one = broad_norm(f, p, d);
    CHECK(one.value <= one.dominating);
    CHECK(one.value > 0.0);
    p.A = static_cast<int>(one.caps);
    CHECK(broad_norm(f, p, d).value == 0.0);
    p.A = 1;
    p.resolution = 1.0;
    CHECK_THROWS_AS(broad_norm(f, p, d), ConfigError);
  }

  TEST_CASE("broad norm decreases in A") {
    FieldRecipe r;
    r.kind = RecipeKind::random_annulus;
    r.dim = 2;
    r.R = 1.0;
    r.resolution = 32.0;
    r.seed = 8;
    const auto f = make_field(r);
    BroadParams p;
    BroadDomain d;
    d.R = 4.0;
    d.quad = 2;
    double prev = INFINITY;
    for (int A = 1; A <= 3; ++A) {
      p.A = A;
      const auto rep = broad_norm(f, p, d);
      CHECK(rep.value <= prev);
      CHECK(rep.value <= rep.dominating);
      prev = rep.value;
    }
  }

  TEST_CASE("frame bounds are stable across seeds") {
    GaborSystem sys;
    sys.R = 64.0;
    const auto ref = frame_bounds(sys, 4096, 1);
    for (std::uint64_t seed = 2; seed < 6; ++seed) {
      const auto fb = frame_bounds(sys, 4096, seed);
      CHECK(fb.A == doctest::Approx(ref.A).epsilon(0.05));
      CHECK(fb.B == doctest::Approx(ref.B).epsilon(0.05));
    }
  }
}
