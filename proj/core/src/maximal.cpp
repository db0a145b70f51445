#include "tanglab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tanglab/parallel.hpp"
#include "tanglab/propagator.hpp"

namespace tanglab {

namespace {

using Gamma = std::function<Vec(const Vec&, double)>;

struct Scan {
  double coarse = 0.0;
  double refined = 0.0;
  double t = 0.0;
};

Scan scan_times(const PreparedEvolution& E, const Gamma& g, const Vec& x, const std::vector<double>& ts, double tol) {
  Scan s;
  std::size_t kb = 0;
  double best = -1.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double v = std::abs(E(g(x, ts[k]), ts[k]));
    if (v > best) {
      best = v;
      kb = k;
    }
  }
  s.coarse = best;
  s.refined = best;
  s.t = ts[kb];
  if (ts.size() < 2) return s;
  double a = ts[kb == 0 ? 0 : kb - 1];
  double b = ts[std::min(kb + 1, ts.size() - 1)];
  const double width = b - a;
  if (!(width > 0.0)) return s;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  auto val = [&](double t) { return std::abs(E(g(x, t), t)); };
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = val(c), fd = val(d);
  while (b - a > tol * width) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = val(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = val(d);
    }
    if (fc > s.refined) {
      s.refined = fc;
      s.t = c;
    }
    if (fd > s.refined) {
      s.refined = fd;
      s.t = d;
    }
  }
  return s;
}

MaximalResult run_scan(const BandlimitedField& f, const SymbolSpec& P, const std::vector<Gamma>& gammas,
                       const std::vector<double>& thetas, const GridSpec& grid) {
  validate_grid(grid, f);
  MaximalResult res;
  res.xs = grid.points();
  const auto ts = time_grid(grid, f, P);
  res.time_steps = ts.size();
  res.dt = ts.size() > 1 ? ts[1] - ts[0] : 0.0;

  double x_max = 0.0;
  const std::size_t stride = std::max<std::size_t>(1, ts.size() / 64);
  for (const auto& g : gammas) {
    for (const auto& x : res.xs) {
      x_max = std::max(x_max, norm(x));
      for (std::size_t k = 0; k < ts.size(); k += stride) x_max = std::max(x_max, norm(g(x, ts[k])));
      x_max = std::max(x_max, norm(g(x, ts.back())));
    }
  }
  check_resolution(f, P, x_max, ts.back());

  const PreparedEvolution E(f, P);
  const std::size_t n = res.xs.size();
  res.coarse.assign(n, 0.0);
  res.refined.assign(n, 0.0);
  res.t_arg.assign(n, 0.0);
  res.theta_arg.assign(n, thetas.empty() ? 0.0 : thetas.front());
  parallel_for(n, [&](std::size_t i) {
    std::size_t best_g = 0;
    Scan best;
    best.coarse = -1.0;
    for (std::size_t gi = 0; gammas.size() > 1 && gi < gammas.size(); ++gi) {
      // Coarse pass only; refinement happens once at the winning theta.
      Scan s = scan_times(E, gammas[gi], res.xs[i], ts, 2.0);
      if (s.coarse > best.coarse) {
        best = s;
        best_g = gi;
      }
    }
    const Scan fine = scan_times(E, gammas[best_g], res.xs[i], ts, grid.refine_tol);
    res.coarse[i] = fine.coarse;
    res.refined[i] = std::max(fine.refined, fine.coarse);
    res.t_arg[i] = fine.t;
    if (!thetas.empty()) res.theta_arg[i] = thetas[best_g];
  });
  return res;
}

}  // namespace

double GridSpec::step() const {
  const double n = std::max(1.0, std::ceil(2.0 * radius / dx - 1e-9));
  return 2.0 * radius / n;
}

double GridSpec::cell() const { return dim == 1 ? step() : step() * step(); }

std::vector<Vec> GridSpec::points() const {
  if (dim != 1 && dim != 2) throw ConfigError("grid dimension must be 1 or 2");
  if (!(radius > 0.0) || !(dx > 0.0)) throw ConfigError("grid radius and step must be positive");
  const double h = step();
  const auto n = static_cast<std::size_t>(std::llround(2.0 * radius / h));
  std::vector<Vec> out;
  if (dim == 1) {
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back({center[0] - radius + (i + 0.5) * h, 0.0});
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double u = -radius + (i + 0.5) * h, v = -radius + (j + 0.5) * h;
      if (u * u + v * v <= radius * radius) out.push_back({center[0] + u, center[1] + v});
    }
  }
  return out;
}

std::vector<double> time_grid(const GridSpec& grid, const BandlimitedField& f, const SymbolSpec& P) {
  if (!(grid.T >= grid.t_min) || grid.t_min < 0.0) throw ConfigError("time window must satisfy 0 <= t_min <= T");
  const double span = grid.T - grid.t_min;
  if (span == 0.0) return {grid.t_min};
  std::size_t K = 0;
  if (grid.rule == TimeRule::fixed) {
    if (grid.steps == 0) throw ConfigError("fixed time rule needs steps >= 1");
    K = std::min(grid.steps, grid.max_steps);
  } else {
    const double mass = f.l1_mass();
    const double eps = grid.eps_abs > 0.0 ? grid.eps_abs : grid.eps_rel * mass;
    if (!(eps > 0.0)) throw ConfigError("derivative rule needs a positive tolerance");
    const double growth = std::pow(std::max(1.0, f.band()), P.m) * mass;
    const double dt = std::min(grid.T, 1.0) / (8.0 * std::ceil(growth / eps));
    const double k = std::ceil(span / dt - 1e-9);
    K = k > static_cast<double>(grid.max_steps) ? grid.max_steps : static_cast<std::size_t>(k);
  }
  std::vector<double> ts(K + 1);
  const double dt = span / static_cast<double>(K);
  for (std::size_t k = 0; k <= K; ++k) ts[k] = grid.t_min + dt * static_cast<double>(k);
  ts.back() = grid.T;
  return ts;
}

void validate_grid(const GridSpec& grid, const BandlimitedField& f) {
  if (grid.dim != f.dim()) throw ConfigError("grid and field dimensions differ");
  const double limit = 1.0 / (2.0 * f.band());
  if (f.band() > 0.0 && grid.dx > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "spatial step " << grid.dx << " exceeds 1/(2 lambda) = " << limit;
    throw ConfigError(os.str());
  }
}

MaximalResult maximal_function(const BandlimitedField& f, const SymbolSpec& P, const CurveSpec& curve,
                               const GridSpec& grid) {
  curve.validate();
  Gamma g = [&curve](const Vec& x, double t) { return eval_curve(curve, x, t); };
  return run_scan(f, P, {g}, {}, grid);
}

MaximalResult maximal_function(const BandlimitedField& f, const SymbolSpec& P, const CurveFamily& fam,
                               const GridSpec& grid) {
  if (f.dim() != 1) throw UsageError("curve families are one-dimensional");
  std::vector<double> thetas = grid.thetas;
  if (thetas.empty()) thetas = fam.domain.sample(8, 0);
  std::vector<Gamma> gs;
  for (double th : thetas) {
    if (!fam.domain.contains(th)) throw ConfigError("theta sample outside the family domain");
    gs.push_back([&fam, th](const Vec& x, double t) { return Vec{eval_curve(fam, x[0], t, th), 0.0}; });
  }
  return run_scan(f, P, gs, thetas, grid);
}

double lp_norm(const std::vector<double>& values, double p, const GridSpec& grid) {
  if (!(p >= 1.0)) throw ConfigError("p must be >= 1");
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) return 0.0;
  // Scale by the maximum to keep |v|^p in range for large p.
  double acc = 0.0, comp = 0.0;
  for (double v : values) {
    const double y = std::pow(std::abs(v) / vmax, p) - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  return vmax * std::pow(acc * grid.cell(), 1.0 / p);
}

double operator_ratio(const BandlimitedField& f, const SymbolSpec& P, const CurveSpec& curve, const GridSpec& grid,
                      double p, double s) {
  const double denom = sobolev_norm(f, {s});
  if (!(denom > 0.0)) throw ConfigError("zero field has no operator ratio");
  const auto m = maximal_function(f, P, curve, grid);
  return lp_norm(m.refined, p, grid) / denom;
}

ScalingFit exponent_fit(const std::vector<double>& lambdas, const std::vector<double>& ratios) {
  for (double r : ratios)
    if (!(r > 0.0)) throw ConfigError("exponent fit needs positive ratios");
  return fit_loglog(lambdas, ratios);
}

BatteryResult battery_scan(const SymbolSpec& P, const CurveSpec& curve, double p, double s,
                           const std::vector<double>& lambdas, const std::vector<Witness>& battery,
                           std::optional<double> threshold) {
  if (battery.empty()) throw ConfigError("witness battery is empty");
  BatteryResult out;
  out.lambdas = lambdas;
  out.threshold = threshold;
  out.envelope.assign(lambdas.size(), 0.0);
  for (const auto& w : battery) {
    out.names.push_back(w.name);
    std::vector<double> r;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const auto f = w.field(lambdas[i]);
      const auto g = w.grid(lambdas[i]);
      r.push_back(operator_ratio(f, P, curve, g, p, s));
      out.envelope[i] = std::max(out.envelope[i], r.back());
    }
    out.fits.push_back(exponent_fit(lambdas, r));
    if (threshold && out.fits.back().slope > *threshold + 0.15) out.flagged.push_back(w.name);
    out.ratios.push_back(std::move(r));
  }
  out.envelope_fit = exponent_fit(lambdas, out.envelope);
  return out;
}

}  // namespace tanglab
