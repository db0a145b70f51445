#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tanglab/curves.hpp"
#include "tanglab/spectral.hpp"

namespace tanglab {

// Gaussian Gabor system at scale R: spatial step a = R^{1/2}, frequency step
// b = R^{-1/2}, window g(u) = exp(-u^2 / (2 s^2)) per axis with s = kappa R^{1/2}.
// Atoms g_{m,n}(x) = prod_i g(x_i - n_i a) e^{i m_i b (x_i - n_i a)}.
struct GaborSystem {
  double R = 64.0;
  int dim = 2;
  double kappa = 0.5;
  double a() const { return std::sqrt(R); }
  double b() const { return 1.0 / std::sqrt(R); }
  double s() const { return kappa * std::sqrt(R); }
  // G0(u) = sum_n g(u - n a)^2
  double G0(double u) const;
  // Frame operator is multiplication by (2 pi / b)^dim prod_i G0(x_i).
  double frame_density(const Vec& x) const;
  cplx atom(const std::array<int, 2>& m, const std::array<int, 2>& n, const Vec& x) const;
};

struct Tile {
  std::array<int, 2> m{0, 0};  // frequency index, c(theta) = m b
  std::array<int, 2> n{0, 0};  // spatial index, c(nu) = n a
  Vec c_theta{0.0, 0.0};
  Vec c_nu{0.0, 0.0};
  double R = 64.0;
};

struct Decomposition {
  GaborSystem system;
  std::vector<Tile> tiles;
  std::vector<cplx> coefficients;
  std::size_t dropped = 0;      // |coef| < 1e-12 ||f||_2
  double norm2 = 0.0;           // ||f||_2 by Plancherel, (2 pi)^n sum w |c|^2
  double coef_energy = 0.0;     // sum |coef|^2 (kept and dropped)
  double spatial_radius = 0.0;  // tiles cover |c(nu)| <= this radius
};

// f must have band <= 1. Coefficients <f, g_{m,n}> over spatial centres
// within `spatial_radius` (default R) plus the window margin.
Decomposition decompose(const BandlimitedField& f, const GaborSystem& sys, double spatial_radius = 0.0);

// Dual-frame synthesis sum c_{m,n} g_{m,n}(x) / frame_density(x).
std::vector<cplx> reconstruct(const Decomposition& d, const std::vector<Vec>& points);

struct FrameBounds {
  double A = 0.0, B = 0.0;
  double ratio() const { return B / A; }
};

// min / max of the frame density over seeded points with a random lattice offset;
// sum |coef|^2 / ||f||_2^2 lies in [A, B] for fields concentrated inside the tiled region.
FrameBounds frame_bounds(const GaborSystem& sys, std::size_t samples, std::uint64_t seed);

struct TubeOptions {
  double delta = 0.05;
  double kappa = 1.15;      // window of the evolved packet: s = kappa R^{1/2}
  std::size_t space_steps = 128;  // grid cells per axis over B(0,R)
  std::size_t time_steps = 64;
  std::size_t verify_samples = 200;
  std::uint64_t seed = 1;
};

struct TubeMass {
  double fraction = 0.0;
  double radius = 0.0;  // dilation * R^{1/2 + delta}
  double delta = 0.05;
  double dilation = 1.0;
  double closed_form_error = 0.0;  // worst relative gap to per-axis quadrature
};

// Share of the space-time L^2 mass of |e^{itΔ} phi_{theta,nu}(x + R gamma(t/R^2))|
// over B(0,R) x [0,R] lying in |x - c(nu) + 2 t c(theta)| <= dilation R^{1/2+delta}.
// The curve must pass verify_conditions; throws PreconditionError otherwise.
TubeMass tube_mass(const Tile& tile, const CurveSpec& curve, double dilation, const TubeOptions& opt = {});

// Closed-form modulus of the free evolution of the Gaussian packet.
double packet_modulus(const Tile& tile, double kappa, const Vec& x, double t);

struct BroadParams {
  double K = 2.0;
  double M = 2.0;
  int A = 1;
  double p = 2.0;
  double q = std::numeric_limits<double>::infinity();  // l^q over time blocks; inf is the sup
  double resolution = 0.0;  // radians; 0 selects min((KM)^-1 / 4, pi/360)
};

struct BroadDomain {
  double R = 8.0;
  CurveSpec curve = CurveSpec::vertical();
  std::size_t quad = 3;  // quadrature points per axis per cell
};

struct BroadReport {
  double value = 0.0;
  double dominating = 0.0;  // same assembly with every cap kept
  std::size_t caps = 0;
  std::size_t directions = 0;
  std::size_t masks = 0;
  std::size_t cells = 0;
  double cap_width = 0.0;
  double resolution = 0.0;
};

// Caps are squares of side (KM)^-1 partitioning the frequency support (2D fields).
// Cells are K-squares inside B(0,R) times K-intervals of [0,R]; the value is
// (sum_B (sum_j mu_j^q)^{1/q})^{1/p} with mu the per-cell min over A lines.
BroadReport broad_norm(const BandlimitedField& f, const BroadParams& params, const BroadDomain& domain);

// Per-cell minimum over A-tuples of lines of the largest uncovered cap value;
// masks[d][c] says whether direction d absorbs cap c.
double broad_cell_min(const std::vector<double>& cap_values, const std::vector<std::vector<bool>>& masks, int A);

}  // namespace tanglab
