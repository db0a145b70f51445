#include "tanglab/rate.hpp"

#include <algorithm>
#include <cmath>

#include "tanglab/parallel.hpp"
#include "tanglab/propagator.hpp"

namespace tanglab {

std::vector<double> dyadic_times(int j_lo, int j_hi) {
  if (j_hi < j_lo) throw ConfigError("dyadic schedule needs j_hi >= j_lo");
  std::vector<double> ts;
  for (int j = j_lo; j <= j_hi; ++j) ts.push_back(std::ldexp(1.0, -j));
  return ts;
}

std::vector<RatePoint> rate_profile(const BandlimitedField& f, const SymbolSpec& P, const CurveSpec& curve, double h,
                                    const GridSpec& ball, const std::vector<double>& ts) {
  if (!(h >= 0.0)) throw ConfigError("rate exponent h must be >= 0");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] > 0.0)) throw ConfigError("rate schedule times must be positive");
    if (i > 0 && !(ts[i] < ts[i - 1])) throw ConfigError("rate schedule must be strictly decreasing");
  }
  const auto xs = ball.points();
  std::vector<SpaceTimePoint> still;
  for (const auto& x : xs) still.push_back({x, 0.0});
  const auto base = evolve(f, P, still);
  std::vector<RatePoint> out(ts.size());
  for (std::size_t j = 0; j < ts.size(); ++j) {
    std::vector<SpaceTimePoint> moved;
    for (const auto& x : xs) moved.push_back({eval_curve(curve, x, ts[j]), ts[j]});
    const auto v = evolve(f, P, moved);
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) worst = std::max(worst, std::abs(v[i] - base[i]));
    out[j] = {ts[j], worst / std::pow(ts[j], h)};
  }
  return out;
}

Region region_for(double m, double alpha) { return alpha >= 1.0 / m ? Region::D1 : Region::D2; }

const char* region_name(Region r) { return r == Region::D1 ? "D1" : "D2"; }

bool in_region(Region r, double delta, double h, double m, double alpha) {
  if (delta < 0.0 || h < 0.0 || !(h < alpha)) return false;
  return r == Region::D1 ? h * m <= delta : h <= alpha * delta;
}

TrendResult trend_test(const std::vector<RatePoint>& profile, std::size_t window, double factor) {
  TrendResult out;
  if (profile.size() < std::max<std::size_t>(window, 2)) return out;
  out.decreasing = true;
  for (std::size_t k = profile.size() - window + 1; k < profile.size(); ++k)
    if (!(profile[k].ratio < profile[k - 1].ratio)) out.decreasing = false;
  const double first = profile.front().ratio;
  out.final_over_initial = first > 0.0 ? profile.back().ratio / first : 0.0;
  out.pass = out.decreasing && out.final_over_initial <= factor;
  return out;
}

BoundaryResult boundary_obstruction(double alpha, const std::vector<double>& ts, const GridSpec& ball) {
  BoundaryResult out;
  FieldRecipe r;
  r.kind = RecipeKind::gaussian;
  r.dim = ball.dim;
  r.sigma = 1.0;
  r.extent = 8.0;
  r.resolution = 32.0;
  const auto f = make_field(r);
  const auto curve = CurveSpec::power_shift({-1.0, 0.0}, alpha);
  out.profile = rate_profile(f, SymbolSpec::paraboloid(), curve, alpha, ball, ts);
  // d_1 f = sum w c i xi_1 e^{ix.xi}
  std::vector<FrequencyAtom> d = f.atoms();
  for (auto& a : d) a.c *= cplx(0.0, a.xi[0]);
  const BandlimitedField df(f.dim(), d, f.provenance());
  const auto vals = evaluate_field(df, ball.points());
  for (const auto& v : vals) out.sup_derivative = std::max(out.sup_derivative, std::abs(v));
  out.min_ratio = out.profile.empty() ? 0.0 : out.profile.front().ratio;
  for (const auto& p : out.profile) out.min_ratio = std::min(out.min_ratio, p.ratio);
  out.pass = !out.profile.empty() && out.min_ratio >= 0.5 * out.sup_derivative;
  return out;
}

RegionCheckReport region_check(const RegionCheckConfig& cfg) {
  RegionCheckReport out;
  out.region = region_for(cfg.m, cfg.alpha);
  const auto ts = dyadic_times(cfg.j_lo, cfg.j_hi);
  const auto P = SymbolSpec::modulus_power(cfg.m);
  const auto curve = CurveSpec::power_shift({-1.0, 0.0}, cfg.alpha);
  GridSpec ball = cfg.ball;
  out.pass = true;
  for (const auto& [delta, h] : cfg.pairs) {
    RegionCell cell;
    cell.delta = delta;
    cell.h = h;
    cell.inside = in_region(out.region, delta, h, cfg.m, cfg.alpha);
    if (cell.inside) {
      for (std::size_t k = 0; k < cfg.fields; ++k) {
        FieldRecipe r;
        r.kind = RecipeKind::sobolev_random;
        r.dim = ball.dim;
        r.R = cfg.band;
        r.resolution = cfg.resolution;
        r.decay = cfg.s + delta;
        r.seed = cfg.seed + k;
        const auto f = make_field(r);
        GridSpec g = ball;
        g.dx = std::min(g.dx, 1.0 / (2.0 * f.band()));
        cell.trends.push_back(trend_test(rate_profile(f, P, curve, h, g, ts), cfg.window, cfg.factor));
        cell.pass = cell.pass && cell.trends.back().pass;
      }
    }
    out.pass = out.pass && cell.pass;
    out.cells.push_back(std::move(cell));
  }
  GridSpec gball = ball;
  gball.radius = std::max(ball.radius, 2.0);
  gball.center = {0.0, 0.0};
  gball.dx = std::min(ball.dx, 1.0 / 32.0);
  out.boundary = boundary_obstruction(cfg.alpha, dyadic_times(4, cfg.j_hi), gball);
  out.pass = out.pass && out.boundary.pass;
  return out;
}

}  // namespace tanglab
