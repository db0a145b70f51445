#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tanglab/curves.hpp"
#include "tanglab/maximal.hpp"
#include "tanglab/spectral.hpp"

namespace tanglab {

struct RatePoint {
  double t = 0.0;
  double ratio = 0.0;
};

// t_j = 2^-j for j = j_lo..j_hi (strictly decreasing).
std::vector<double> dyadic_times(int j_lo, int j_hi);

// Per t: sup over the ball grid of |e^{itP(D)}f(gamma(x,t)) - f(x)| / t^h.
std::vector<RatePoint> rate_profile(const BandlimitedField& f, const SymbolSpec& P, const CurveSpec& curve, double h,
                                    const GridSpec& ball, const std::vector<double>& ts);

enum class Region { D1, D2 };

// D1 for 1/m <= alpha < 1, D2 for alpha < 1/m.
Region region_for(double m, double alpha);
const char* region_name(Region r);
// D1: delta, h >= 0, h <= delta/m, h < alpha.  D2: h <= alpha delta instead.
bool in_region(Region r, double delta, double h, double m, double alpha);

struct TrendResult {
  bool decreasing = false;         // strictly decreasing over the last `window` points
  double final_over_initial = 0.0;
  bool pass = false;
};

TrendResult trend_test(const std::vector<RatePoint>& profile, std::size_t window = 4, double factor = 0.2);

struct RegionCheckConfig {
  double m = 2.0;
  double alpha = 0.6;
  double s = 0.25;
  double band = 16.0;
  double resolution = 8.0;
  std::vector<std::pair<double, double>> pairs{{0.5, 0.25}, {0.6, 0.2}, {0.8, 0.3}, {1.0, 0.1}, {0.3, 0.1}};
  int j_lo = 8;
  int j_hi = 20;
  std::size_t window = 4;
  double factor = 0.2;
  std::size_t fields = 10;
  std::uint64_t seed = 1;
  GridSpec ball;
};

struct RegionCell {
  double delta = 0.0, h = 0.0;
  bool inside = false;
  std::vector<TrendResult> trends;  // one per random field, empty when outside
  bool pass = true;
};

struct BoundaryResult {
  std::vector<RatePoint> profile;
  double sup_derivative = 0.0;  // sup over the ball grid of |d_1 f|
  double min_ratio = 0.0;
  bool pass = false;            // min_ratio >= 0.5 sup_derivative
};

struct RegionCheckReport {
  Region region = Region::D1;
  std::vector<RegionCell> cells;
  BoundaryResult boundary;
  bool pass = false;
};

// Gaussian data along x - e_1 t^alpha with h = alpha: the quotient stays
// comparable to sup |d_1 f| instead of tending to zero.
BoundaryResult boundary_obstruction(double alpha, const std::vector<double>& ts, const GridSpec& ball);

RegionCheckReport region_check(const RegionCheckConfig& cfg);

}  // namespace tanglab
