#include "tanglab/counterexamples.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "tanglab/parallel.hpp"
#include "tanglab/propagator.hpp"

namespace tanglab {

namespace {

constexpr double kE = 2.718281828459045;

std::vector<double> midpoints(double a, double b, double h_max) {
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / h_max - 1e-12)));
  const double h = (b - a) / static_cast<double>(n);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a + (static_cast<double>(i) + 0.5) * h;
  return out;
}

// Nodes per unit frequency satisfying the spacing rule with a 10% margin.
double rule_resolution(double x_max, double t_max, double grad) {
  return std::max(2.0, std::ceil(2.2 * (x_max + t_max * grad)));
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.empty()) return 0.0;
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

// --- cube witness -----------------------------------------------------------

int CubeWitness::regime() const { return alpha >= 1.0 / m ? 1 : 2; }

double CubeWitness::default_t0() const {
  return regime() == 1 ? std::pow(R, -m) / 100.0 : std::pow(R, -1.0 / alpha);
}

BandlimitedField CubeWitness::field() const {
  FieldRecipe r;
  r.kind = RecipeKind::cube;
  r.dim = dim;
  r.R = R;
  r.resolution = resolution;
  return make_field(r);
}

CurveSpec CubeWitness::curve() const { return CurveSpec::power_shift({1.0 / 1000.0, 0.0}, alpha); }

CubeMainTerm cube_main_term(const CubeWitness& w, const Vec& x, std::optional<double> t0) {
  if (!(w.R >= 1.0) || !(w.m >= 1.0) || !(w.alpha > 0.0 && w.alpha <= 1.0))
    throw ConfigError("cube witness needs R >= 1, m >= 1, alpha in (0,1]");
  if (norm(x) >= 1.0 / 1000.0) throw PreconditionError("x must lie in B(0, 1/1000)");
  CubeMainTerm out;
  out.regime = w.regime();
  const double R = w.R, m = w.m, a = w.alpha;
  if (out.regime == 1) {
    const double q = std::pow(R + 1.0, m) / std::pow(R, m);
    if (!(q <= 2.0)) throw PreconditionError("regime 1 needs (R+1)^m / R^m <= 2");
    out.remainder_bound = std::expm1(q / 50.0) - q / 50.0;
    out.main_floor = 1.0 / 200.0;
    out.remainder_cap = (kE - 2.0) / 625.0;
  } else {
    if (!((R + 1.0) / R <= 1.5)) throw PreconditionError("regime 2 needs (R+1)/R <= 3/2");
    const double tail = std::pow(R + 1.0, m) / std::pow(R, 1.0 / a);
    if (!(tail < 1.0 / 2000.0)) throw PreconditionError("regime 2 needs (R+1)^m / R^{1/alpha} < 1/2000");
    const double bound = (R + 1.0) / (1000.0 * R) + tail;
    out.remainder_bound = std::expm1(bound) - bound;
    out.main_floor = 1.0 / 2000.0;
    out.remainder_cap = (kE - 2.0) / 250000.0;
  }
  out.pass_level = out.main_floor - out.remainder_cap;
  out.t0 = t0 ? *t0 : w.default_t0();
  if (!(out.t0 > 0.0)) throw PreconditionError("t0 must be positive");

  const double c1 = std::pow(out.t0, a) / 1000.0;
  const auto f = w.field();
  KahanSum acc;
  for (const auto& at : f.atoms()) {
    const double xi1 = at.xi[0];
    const double amp = c1 * xi1 + out.t0 * std::pow(xi1, m);
    const double ph = dot(x, at.xi);
    // e^{i ph} * i amp
    acc.add(-at.w * amp * std::sin(ph), at.w * amp * std::cos(ph));
  }
  out.main = std::abs(acc.value());
  out.pass = out.main - out.remainder_bound >= out.pass_level;
  return out;
}

RateExponent cube_rate_exponent(const CubeWitness& w, double delta1, const std::vector<double>& Rs,
                                std::size_t grid_points) {
  if (!(delta1 >= 0.0 && delta1 < 1.0)) throw ConfigError("delta1 must lie in [0, 1)");
  if (grid_points < 2) throw ConfigError("rate grid needs >= 2 points per axis");
  RateExponent out;
  out.regime = w.regime();
  out.target = out.regime == 1 ? delta1 * w.m : delta1 / w.alpha;
  std::vector<double> values;
  for (double R : Rs) {
    CubeWitness c = w;
    c.R = R;
    const double t0 = c.default_t0();
    const auto f = c.field();
    const auto P = c.symbol();
    const auto curve = c.curve();
    GridSpec g;
    g.dim = w.dim;
    g.radius = 1.0 / 1000.0;
    g.dx = std::min(2.0 * g.radius / static_cast<double>(grid_points), 1.0 / (2.0 * f.band()));
    const auto xs = g.points();
    std::vector<SpaceTimePoint> moved, still;
    for (const auto& x : xs) {
      moved.push_back({eval_curve(curve, x, t0), t0});
      still.push_back({x, 0.0});
    }
    const auto a = evolve(f, P, moved);
    const auto b = evolve(f, P, still);
    const double weight = std::pow(t0, -delta1);
    double l1 = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) l1 += weight * std::abs(a[i] - b[i]) * g.cell();
    values.push_back(l1);
  }
  out.fit = fit_loglog(Rs, values);
  return out;
}

// --- half-scale witness -----------------------------------------------------

BandlimitedField HalfScaleWitness::field() const {
  FieldRecipe r;
  r.kind = RecipeKind::ball;
  r.dim = 1;
  r.R = std::sqrt(lambda);
  // |x| <= 1 and t <= 1/lambda with grad P = 2 lambda^{1/2}
  r.resolution = rule_resolution(1.0, 1.0 / lambda, 2.0 * std::sqrt(lambda));
  return make_field(r);
}

CurveSpec HalfScaleWitness::curve() const { return CurveSpec::power_shift({sign, 0.0}, alpha); }

HalfScaleReport halfscale_S_set(const HalfScaleWitness& w, std::size_t samples) {
  if (!(w.lambda >= 64.0)) throw PreconditionError("half-scale witness needs lambda >= 2^6");
  if (!(w.alpha > 0.0 && w.alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
  if (std::abs(w.sign) != 1.0) throw ConfigError("curve sign must be +1 or -1");
  HalfScaleReport out;
  const double a = std::pow(w.lambda, -0.5) / 100.0;
  const double b = 1.0 / (100.0 * w.lambda);
  const double ba = std::pow(b, w.alpha);
  out.exact_measure = 2.0 * a + ba;
  out.sweep_step = b;
  out.floor = std::sqrt(w.lambda);

  // u = -sign * x is a member iff u lies in (-a, b^alpha + a).
  const double hs = out.sweep_step;
  const double reach = ba + a + 2.0 * hs;
  const auto n = static_cast<std::size_t>(std::ceil(2.0 * reach / hs));
  std::vector<double> members;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = -reach + (static_cast<double>(j) + 0.5) * hs;
    const double u = -w.sign * x;
    if (u > -a && u < ba + a) members.push_back(x);
  }
  out.measure = static_cast<double>(members.size()) * hs;

  if (samples == 0 || samples >= members.size()) {
    out.xs = members;
  } else {
    for (std::size_t k = 0; k < samples; ++k) {
      const std::size_t idx = samples == 1 ? 0 : k * (members.size() - 1) / (samples - 1);
      out.xs.push_back(members[idx]);
    }
  }
  std::vector<SpaceTimePoint> pts;
  for (double x : out.xs) {
    const double u = -w.sign * x;
    double tau;
    if (u <= 0.0)
      tau = std::min(ba / 2.0, (u + a) / 2.0);
    else if (u >= ba)
      tau = ba * (1.0 - 1e-9);
    else
      tau = u;
    const double t = std::pow(tau, 1.0 / w.alpha);
    out.ts.push_back(t);
    pts.push_back({{x + w.sign * tau, 0.0}, t});
  }
  const auto f = w.field();
  const auto vals = evolve(f, SymbolSpec::paraboloid(), pts);
  out.min_modulus = vals.empty() ? 0.0 : std::abs(vals.front());
  for (const auto& v : vals) {
    out.moduli.push_back(std::abs(v));
    out.min_modulus = std::min(out.min_modulus, out.moduli.back());
  }
  out.bound_holds = !vals.empty() && out.min_modulus >= out.floor;
  return out;
}

double sharp_p_claim(double alpha) {
  if (alpha >= 0.5) return 4.0;
  if (alpha > 0.25) return 8.0 * alpha;
  return 2.0;
}

SharpPReport sharp_p_threshold(double alpha, double s, const std::vector<double>& lambdas, double p_lo, double p_hi,
                               double p_step) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
  if (!(p_lo >= 1.0) || !(p_hi > p_lo) || !(p_step > 0.0)) throw ConfigError("invalid p grid");
  SharpPReport out;
  out.alpha = alpha;
  out.s = s;
  out.lambdas = lambdas;
  out.claim = sharp_p_claim(alpha);
  std::vector<HalfScaleReport> reps;
  std::vector<double> measures, norms;
  for (double lam : lambdas) {
    HalfScaleWitness w{lam, alpha, -1.0};
    reps.push_back(halfscale_S_set(w));
    measures.push_back(reps.back().measure);
    norms.push_back(sobolev_norm(w.field(), {s}));
  }
  out.measure_fit = fit_loglog(lambdas, measures);
  out.norm_fit = fit_loglog(lambdas, norms);
  const auto np = static_cast<std::size_t>(std::floor((p_hi - p_lo) / p_step + 1e-9)) + 1;
  out.threshold = p_lo;
  bool any = false;
  for (std::size_t k = 0; k < np; ++k) {
    const double p = p_lo + p_step * static_cast<double>(k);
    std::vector<double> lhs;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      GridSpec g;
      g.dx = reps[i].sweep_step;
      lhs.push_back(lp_norm(reps[i].moduli, p, g));
    }
    const double diff = fit_loglog(lambdas, lhs).slope - out.norm_fit.slope;
    out.ps.push_back(p);
    out.differences.push_back(diff);
    if (diff <= 0.0) {
      out.threshold = p;
      any = true;
    }
  }
  out.saturated = any && out.differences.back() <= 0.0;
  return out;
}

// --- Bourgain strips ----------------------------------------------------------

int BourgainWitness::strip_lo() const {
  // smallest integer L with L^3 >= R
  int L = std::max(1, static_cast<int>(std::floor(std::cbrt(R))) - 1);
  while (static_cast<double>(L) * L * L < R) ++L;
  return L;
}

int BourgainWitness::strip_count() const { return strip_lo(); }

double BourgainWitness::support_measure() const { return strip_count() * 2.0 * std::sqrt(R); }

double BourgainWitness::spacing() const {
  const int L = strip_lo();
  const double top1 = R + std::sqrt(R);
  const double top2 = std::pow(R, 2.0 / 3.0) * (2 * L - 1) + 1.0;
  const double band = std::hypot(top1, top2);
  return 0.5 / (1.0 + (1.0 / R) * 2.0 * band);
}

BandlimitedField BourgainWitness::field() const {
  const double h = spacing();
  const auto a1 = midpoints(R - std::sqrt(R), R + std::sqrt(R), h);
  const double w1 = 2.0 * std::sqrt(R) / static_cast<double>(a1.size());
  std::vector<FrequencyAtom> atoms;
  const int L = strip_lo();
  const double r23 = std::pow(R, 2.0 / 3.0);
  for (double u : a1) {
    for (int l = L; l < 2 * L; ++l) {
      const auto a2 = midpoints(r23 * l, r23 * l + 1.0, h);
      const double w2 = 1.0 / static_cast<double>(a2.size());
      for (double v : a2) atoms.push_back({{u, v}, w1 * w2, 1.0});
    }
  }
  Provenance prov;
  prov.recipe = "bourgain-strips";
  prov.spacing = h;
  prov.resolution = 1.0 / h;
  prov.params["R"] = R;
  return BandlimitedField(2, std::move(atoms), prov);
}

BourgainEvaluator::BourgainEvaluator(const BourgainWitness& w) : R_(w.R) {
  const double h = w.spacing();
  n1_ = midpoints(R_ - std::sqrt(R_), R_ + std::sqrt(R_), h);
  w1_ = 2.0 * std::sqrt(R_) / static_cast<double>(n1_.size());
  const int L = w.strip_lo();
  const double r23 = std::pow(R_, 2.0 / 3.0);
  for (int l = L; l < 2 * L; ++l) {
    const auto a2 = midpoints(r23 * l, r23 * l + 1.0, h);
    n2_.insert(n2_.end(), a2.begin(), a2.end());
    w2_ = 1.0 / static_cast<double>(a2.size());
  }
}

cplx BourgainEvaluator::axis_sum(const std::vector<double>& nodes, double w, double x, double t) const {
  KahanSum acc;
  for (double xi : nodes) {
    const double ph = x * xi + t * xi * xi;
    acc.add(w * std::cos(ph), w * std::sin(ph));
  }
  return acc.value();
}

cplx BourgainEvaluator::operator()(const Vec& x, double t) const {
  return axis_sum(n1_, w1_, x[0], t) * axis_sum(n2_, w2_, x[1], t);
}

double BourgainEvaluator::sup_time(const Vec& x, double* t_arg) const {
  const double T = 1.0 / R_;
  const double M1 = w1_ * static_cast<double>(n1_.size());
  const double M2 = w2_ * static_cast<double>(n2_.size());
  // Modulus Lipschitz constant of F1 in t after removing the phase e^{itR^2}.
  double D1 = 0.0;
  for (double xi : n1_) D1 += w1_ * std::abs(xi * xi - R_ * R_);
  const double dt1 = 0.05 * M1 / D1;
  const auto K1 = static_cast<std::size_t>(std::ceil(T / dt1));
  const double h1 = T / static_cast<double>(K1);
  std::vector<double> bound(K1);
  for (std::size_t k = 0; k < K1; ++k) {
    const double t = (static_cast<double>(k) + 0.5) * h1;
    bound[k] = (std::abs(axis_sum(n1_, w1_, x[0], t)) + D1 * h1 / 2.0) * M2;
  }
  std::vector<std::size_t> order(K1);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return bound[a] > bound[b]; });

  const double lo2 = n2_.front() * n2_.front(), hi2 = n2_.back() * n2_.back();
  const double lo1 = n1_.front() * n1_.front(), hi1 = n1_.back() * n1_.back();
  const double dt2 = 0.1 / std::max(hi2 - lo2, hi1 - lo1);
  const auto nf = static_cast<std::size_t>(std::ceil(h1 / dt2));
  const double hf = h1 / static_cast<double>(nf);

  double best = 0.0, t_best = 0.5 * h1;
  std::vector<cplx> e1(n1_.size()), r1(n1_.size()), e2(n2_.size()), r2(n2_.size());
  for (std::size_t k : order) {
    if (bound[k] <= best) break;
    // Fine scan of the cell by phase rotation: e^{i(t+hf)xi^2} = e^{itxi^2} e^{i hf xi^2}.
    const double t0 = static_cast<double>(k) * h1 + 0.5 * hf;
    for (std::size_t j = 0; j < n1_.size(); ++j) {
      const double xi = n1_[j];
      e1[j] = std::polar(w1_, x[0] * xi + t0 * xi * xi);
      r1[j] = std::polar(1.0, hf * xi * xi);
    }
    for (std::size_t j = 0; j < n2_.size(); ++j) {
      const double xi = n2_[j];
      e2[j] = std::polar(w2_, x[1] * xi + t0 * xi * xi);
      r2[j] = std::polar(1.0, hf * xi * xi);
    }
    for (std::size_t i = 0; i < nf; ++i) {
      cplx s1 = 0.0, s2 = 0.0;
      for (std::size_t j = 0; j < n1_.size(); ++j) {
        s1 += e1[j];
        e1[j] *= r1[j];
      }
      for (std::size_t j = 0; j < n2_.size(); ++j) {
        s2 += e2[j];
        e2[j] *= r2[j];
      }
      const double v = std::abs(s1 * s2);
      if (v > best) {
        best = v;
        t_best = t0 + static_cast<double>(i) * hf;
      }
    }
  }
  // Golden-section polish with direct sums.
  double a = std::max(1e-300, t_best - hf), b = std::min(T, t_best + hf);
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  auto val = [&](double t) { return std::abs((*this)(x, t)); };
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = val(c), fd = val(d);
  best = std::max(best, val(t_best));
  const double width = b - a;
  while (b - a > 1e-3 * width) {
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
    if (fc > best) {
      best = fc;
      t_best = c;
    }
    if (fd > best) {
      best = fd;
      t_best = d;
    }
  }
  if (t_arg) *t_arg = t_best;
  return best;
}

BourgainReport bourgain_growth(const std::vector<double>& Rs, std::size_t samples, std::uint64_t seed,
                               double quantile_level, double budget_seconds) {
  if (samples < 4) throw ConfigError("bourgain scan needs >= 4 samples");
  if (!(quantile_level > 0.0 && quantile_level < 1.0)) throw ConfigError("quantile must lie in (0,1)");
  const auto start = std::chrono::steady_clock::now();
  BourgainReport out;
  out.quantile = quantile_level;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<Vec> xs;
  while (xs.size() < samples) {
    const Vec v{U(rng), U(rng)};
    if (dot(v, v) < 1.0) xs.push_back(v);
  }
  for (double R : Rs) {
    if (budget_seconds > 0.0) {
      const double used = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (used > budget_seconds) {
        out.partial = true;
        break;
      }
    }
    BourgainWitness w{R};
    const BourgainEvaluator E(w);
    std::vector<double> sups(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { sups[i] = E.sup_time(xs[i]); });
    BourgainPoint pt;
    pt.R = R;
    pt.norm2 = std::sqrt(w.support_measure());
    pt.level = quantile(sups, quantile_level);
    pt.max_modulus = *std::max_element(sups.begin(), sups.end());
    const double cut = 0.5 * std::pow(R, 0.75);
    pt.fraction_above =
        static_cast<double>(std::count_if(sups.begin(), sups.end(), [&](double v) { return v >= cut; })) /
        static_cast<double>(sups.size());
    pt.measure_above = pt.fraction_above * M_PI;
    out.points.push_back(pt);
  }
  if (out.points.size() >= 4) {
    std::vector<double> r, n, l, m;
    for (const auto& p : out.points) {
      r.push_back(p.R);
      n.push_back(p.norm2);
      l.push_back(p.level);
      m.push_back(p.max_modulus);
    }
    out.norm_fit = fit_loglog(r, n);
    out.level_fit = fit_loglog(r, l);
    out.max_fit = fit_loglog(r, m);
    out.s_threshold = out.level_fit.slope - out.norm_fit.slope;
  } else {
    out.partial = true;
  }
  return out;
}

// --- witness battery ----------------------------------------------------------

std::vector<Witness> witness_battery(const BatteryOptions& opt) {
  std::vector<Witness> out;
  const double xm = 2.0 + opt.mu;
  for (const auto& name : opt.names) {
    Witness w;
    w.name = name;
    if (name == "cube" || name == "cube-wide") {
      const bool wide = name == "cube-wide";
      w.field = [=](double lam) {
        const double half = wide ? std::sqrt(lam) : 0.5;
        FieldRecipe r;
        r.kind = RecipeKind::cube;
        r.R = lam - half + 0.5;
        r.resolution = rule_resolution(xm, 1.0 / lam, 2.0 * (lam + half));
        if (!wide) return make_field(r);
        // [lam - half, lam + half] as a translated ball
        r.kind = RecipeKind::ball;
        r.R = half;
        auto b = make_field(r);
        std::vector<FrequencyAtom> atoms = b.atoms();
        for (auto& a : atoms) a.xi[0] += lam;
        Provenance p = b.provenance();
        p.recipe = "indicator-of-interval";
        return BandlimitedField(1, std::move(atoms), p);
      };
      w.grid = [=](double lam) {
        GridSpec g;
        g.dx = 1.0 / (2.0 * (lam + (wide ? std::sqrt(lam) : 1.0)));
        g.T = 1.0 / lam;
        g.rule = TimeRule::fixed;
        g.steps = static_cast<std::size_t>(std::ceil(wide ? 32.0 * std::sqrt(lam) : 64.0));
        return g;
      };
    } else if (name == "half-scale" || name == "ball") {
      const bool full = name == "ball";
      w.field = [=](double lam) {
        const double rad = full ? lam : std::sqrt(lam);
        const double T = full ? 4.0 / (lam * lam) : 1.0 / lam;
        FieldRecipe r;
        r.kind = RecipeKind::ball;
        r.R = rad;
        r.resolution = rule_resolution(xm, T, 2.0 * rad);
        return make_field(r);
      };
      w.grid = [=](double lam) {
        GridSpec g;
        g.dx = 1.0 / (2.0 * (full ? lam : std::sqrt(lam)));
        g.T = full ? 4.0 / (lam * lam) : 1.0 / lam;
        g.rule = TimeRule::fixed;
        g.steps = 128;
        return g;
      };
    } else if (name == "random-phase" || name == "chirp") {
      const bool chirp = name == "chirp";
      const std::uint64_t seed = opt.seed;
      w.field = [=](double lam) {
        FieldRecipe r;
        r.kind = RecipeKind::random_annulus;
        r.R = lam;
        r.seed = seed;
        r.resolution = rule_resolution(xm, 1.0 / lam, 2.0 * lam);
        auto f = make_field(r);
        if (!chirp) return f;
        // Focus at x = 0 at time 1/(2 lambda).
        const double ts = 1.0 / (2.0 * lam);
        std::vector<FrequencyAtom> atoms = f.atoms();
        for (auto& a : atoms) a.c = std::polar(1.0, -ts * a.xi[0] * a.xi[0]);
        Provenance p = f.provenance();
        p.recipe = "chirp-annulus";
        return BandlimitedField(1, std::move(atoms), p);
      };
      w.grid = [=](double lam) {
        GridSpec g;
        g.dx = 1.0 / (2.0 * lam);
        g.T = 1.0 / lam;
        g.rule = TimeRule::fixed;
        g.steps = static_cast<std::size_t>(4.0 * lam);
        return g;
      };
    } else {
      throw ConfigError("unknown witness '" + name + "'");
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace tanglab
