#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tanglab/fit.hpp"

namespace tanglab {

struct CoverResult {
  double delta = 0.0;
  std::size_t N = 0;
  std::vector<double> centers;  // ball k is [centers[k] - delta/2, centers[k] + delta/2]
};

enum class ThetaKind { finite, interval, sequence, custom };

// Compact parameter set in R. Every kind can be clipped to a window, which is
// how decomposition pieces are represented.
class ThetaSet {
 public:
  using CoverFn = std::function<CoverResult(double delta)>;

  static ThetaSet finite(std::vector<double> points);
  static ThetaSet interval(double a, double b);
  // {1/2 + 1/(k+1) : k >= 1} together with its limit 1/2.
  static ThetaSet sequence();
  static ThetaSet custom(CoverFn cover, double lo, double hi);

  ThetaKind kind() const { return kind_; }
  // Bounding interval of the (clipped) set.
  double lo() const;
  double hi() const;
  double diameter() const { return hi() - lo(); }
  bool contains(double theta) const;
  ThetaSet clip(double a, double b) const;
  bool empty() const;

  // Members in increasing order whose distance to the left end of the set
  // exceeds `resolution`, plus the left end itself. For finite and sequence
  // kinds this lists every member that a greedy sweep at that scale must visit.
  std::vector<double> sweep_points(double resolution) const;
  // Seeded members, drawn with extra weight near accumulation points.
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;
  // First `count` generator points of the sequence kind (inside the clip window).
  std::vector<double> generator_points(std::size_t count) const;
  const CoverFn& cover_fn() const { return cover_; }

 private:
  ThetaKind kind_ = ThetaKind::finite;
  std::vector<double> points_;
  double a_ = 0.0, b_ = 0.0;  // interval ends or clip window
  CoverFn cover_;
};

CoverResult box_count(const ThetaSet& theta, double delta);

struct DimensionFit {
  ScalingFit fit;  // scales 1/delta, values N(delta)
  std::vector<double> deltas;
  std::vector<std::size_t> counts;
  bool degenerate = false;
  int j_lo = 4, j_hi = 0;
};

// Least-squares slope of log N(delta) against -log delta over delta = 2^-j, j = j_lo..J.
DimensionFit minkowski_dim(const ThetaSet& theta, int J = 16, int j_lo = 4);

struct ThetaDecomposition {
  double mu = 1.0;
  double diameter = 0.0;  // lambda^-mu
  std::vector<ThetaSet> pieces;
  std::size_t cover_count = 0;
};

// Pieces of diameter <= lambda^-mu with mu = min{1, 2 alpha}.
ThetaDecomposition theta_decompose(const ThetaSet& theta, double lambda, double alpha);

}  // namespace tanglab
