#pragma once

#include <string>
#include <vector>

namespace tanglab {

// Least-squares line through (log2 scale, log2 value).
struct ScalingFit {
  std::vector<double> scales;
  std::vector<double> values;
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double r2 = 1.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  bool degenerate = false;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double r2 = 1.0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

// Requires >= 4 strictly increasing positive scales and positive values.
ScalingFit fit_loglog(const std::vector<double>& scales, const std::vector<double>& values);

}  // namespace tanglab
