#include "tanglab/fit.hpp"

#include <cmath>

#include "tanglab/types.hpp"

namespace tanglab {

double norm(const Vec& a) { return std::hypot(a[0], a[1]); }

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw PreconditionError("least_squares needs >= 2 paired samples");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  if (sxx == 0) throw PreconditionError("least_squares: abscissae are all equal");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    sse += r * r;
  }
  f.stderr_slope = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  return f;
}

ScalingFit fit_loglog(const std::vector<double>& scales, const std::vector<double>& values) {
  if (scales.size() < 4 || scales.size() != values.size())
    throw PreconditionError("scaling fit needs >= 4 (scale, value) samples");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0)) throw PreconditionError("scaling fit: nonpositive scale");
    if (i > 0 && !(scales[i] > scales[i - 1]))
      throw PreconditionError("scaling fit: scales must be strictly increasing");
    if (!(values[i] > 0) || !std::isfinite(values[i]))
      throw PreconditionError("scaling fit: nonpositive or non-finite value");
    lx.push_back(std::log2(scales[i]));
    ly.push_back(std::log2(values[i]));
  }
  const LinearFit lf = least_squares(lx, ly);
  ScalingFit f;
  f.scales = scales;
  f.values = values;
  f.slope = lf.slope;
  f.intercept = lf.intercept;
  f.stderr_slope = lf.stderr_slope;
  f.r2 = lf.r2;
  f.window_lo = scales.front();
  f.window_hi = scales.back();
  return f;
}

}  // namespace tanglab
