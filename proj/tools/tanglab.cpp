// tanglab: experiment runner.
//
//   tanglab [run] <subcommand> [options]
//   tanglab [run] --config <prefix>_config.json
//
// Each run writes <prefix>_config.json (resolved options), data CSVs and
// <prefix>_summary.json {kind, inputs, metrics, pass}. TANGLAB_OUTPUT_DIR
// overrides the directory part of the prefix.
//
// Exit status: 0 all checks pass, 1 some check failed, 2 bad arguments or
// configuration (no artifacts), 3 runtime budget exceeded (partial artifacts).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tanglab/counterexamples.hpp"
#include "tanglab/io.hpp"
#include "tanglab/kernel.hpp"
#include "tanglab/maximal.hpp"
#include "tanglab/parallel.hpp"
#include "tanglab/propagator.hpp"
#include "tanglab/rate.hpp"
#include "tanglab/theta.hpp"
#include "tanglab/wavepacket.hpp"

using namespace tanglab;
using json = nlohmann::ordered_json;

namespace {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "64..2048" doubles from 64 to 2048; "64,96,128" lists values.
std::vector<double> parse_schedule(const std::string& text) {
  std::vector<double> out;
  const auto dots = text.find("..");
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || !std::isfinite(v)) throw CLI::ValidationError("schedule", "bad number '" + s + "'");
    return v;
  };
  if (dots != std::string::npos) {
    const double lo = num(text.substr(0, dots)), hi = num(text.substr(dots + 2));
    if (!(lo > 0.0) || !(hi >= lo)) throw CLI::ValidationError("schedule", "need 0 < lo <= hi in '" + text + "'");
    for (double v = lo; v <= hi * (1 + 1e-12); v *= 2.0) out.push_back(v);
  } else {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(num(tok));
  }
  if (out.empty()) throw CLI::ValidationError("schedule", "empty schedule");
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

std::string to_text(double v) { return format_double(v); }
std::string to_text(int v) { return std::to_string(v); }
std::string to_text(std::size_t v) { return std::to_string(v); }
std::string to_text(const std::string& v) { return v; }

// A subcommand with its option registry, used for the resolved-config echo.
struct Command {
  CLI::App* app = nullptr;
  std::vector<std::string> path;
  std::vector<std::pair<std::string, std::function<std::string()>>> options;

  template <class T>
  CLI::Option* opt(const std::string& name, T& var, const std::string& help) {
    options.push_back({name, [&var] { return to_text(var); }});
    return app->add_option("--" + name, var, help)->capture_default_str()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  }
  json inputs() const {
    json j = json::object();
    for (const auto& [k, f] : options) j[k] = f();
    return j;
  }
  std::string kind() const {
    std::string s;
    for (const auto& p : path) s += (s.empty() ? "" : " ") + p;
    return s;
  }
};

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << j.dump(2) << '\n';
}

struct Run {
  std::string prefix;
  double budget = 0.0;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  json metrics = json::object();
  json checks = json::object();
  mutable std::vector<std::string> written;

  double elapsed() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); }
  bool over_budget() const { return budget > 0.0 && elapsed() > budget; }
  void tick() const {
    if (over_budget()) throw BudgetExceeded("runtime budget exceeded");
  }
  std::string path(const std::string& suffix) const { return prefix + suffix; }
  std::ofstream open(const std::string& suffix) const {
    written.push_back(path(suffix));
    std::ofstream os(path(suffix), std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path(suffix));
    return os;
  }
  void write(const std::string& suffix, const json& j) const {
    written.push_back(path(suffix));
    write_json(path(suffix), j);
  }
  void discard() const {
    std::error_code ec;
    for (const auto& p : written) std::filesystem::remove(p, ec);
  }
  void check(const std::string& name, bool ok) { checks[name] = ok; }
  bool all_pass() const {
    for (const auto& [k, v] : checks.items())
      if (!v.get<bool>()) return false;
    return true;
  }
};

json fit_json(const ScalingFit& f) {
  return json{{"slope", f.slope}, {"intercept", f.intercept}, {"stderr_slope", f.stderr_slope}, {"r2", f.r2}};
}

SymbolSpec make_symbol(const std::string& name, double m) {
  if (name == "paraboloid") return SymbolSpec::paraboloid();
  if (name == "modulus_power") return SymbolSpec::modulus_power(m);
  if (name == "first_coordinate_power") return SymbolSpec::first_coordinate_power(m);
  throw CLI::ValidationError("symbol", "unknown symbol '" + name + "'");
}

CurveSpec make_curve(const std::string& form, double mu1, double mu2, double alpha) {
  if (form == "vertical") return CurveSpec::vertical();
  if (form == "power_shift") return CurveSpec::power_shift({mu1, mu2}, alpha);
  throw CLI::ValidationError("curve", "unknown curve form '" + form + "'");
}

RecipeKind make_recipe(const std::string& name) {
  static const std::map<std::string, RecipeKind> kinds{{"cube", RecipeKind::cube},
                                                       {"ball", RecipeKind::ball},
                                                       {"gaussian", RecipeKind::gaussian},
                                                       {"random_annulus", RecipeKind::random_annulus},
                                                       {"sobolev_random", RecipeKind::sobolev_random}};
  const auto it = kinds.find(name);
  if (it == kinds.end()) throw CLI::ValidationError("recipe", "unknown recipe '" + name + "'");
  return it->second;
}

// --- subcommands --------------------------------------------------------------

struct PropagateOpts {
  std::string recipe = "gaussian", atoms, symbol = "paraboloid", curve = "vertical";
  int dim = 1;
  double band = 4.0, sigma = 1.0, extent = 4.0, resolution = 32.0, m = 2.0, mu1 = 1.0, mu2 = 0.0, alpha = 0.5;
  double radius = 1.0, t_max = 1.0;
  std::size_t nx = 64, nt = 16;
  std::uint64_t seed = 0;
};

int run_propagate(const PropagateOpts& o, Run& run) {
  if (o.dim != 1 && o.dim != 2) throw CLI::ValidationError("dim", "must be 1 or 2");
  if (o.nx == 0 || o.nt == 0) throw CLI::ValidationError("nx/nt", "must be positive");
  std::optional<BandlimitedField> f;
  if (!o.atoms.empty()) {
    std::ifstream is(o.atoms);
    if (!is) throw CLI::ValidationError("atoms", "cannot read " + o.atoms);
    f = read_atoms_csv(is, o.dim);
  } else {
    FieldRecipe r;
    r.kind = make_recipe(o.recipe);
    r.dim = o.dim;
    r.R = r.kind == RecipeKind::gaussian ? 1.0 : o.band;
    r.sigma = o.sigma;
    r.extent = o.extent;
    r.resolution = o.resolution;
    r.seed = o.seed;
    f = make_field(r);
  }
  const auto P = make_symbol(o.symbol, o.m);
  const auto curve = make_curve(o.curve, o.mu1, o.mu2, o.alpha);
  const double shift = o.curve == "vertical" ? 0.0 : std::hypot(o.mu1, o.mu2) * std::pow(o.t_max, o.alpha);
  check_resolution(*f, P, o.radius * std::sqrt(static_cast<double>(o.dim)) + shift, o.t_max);

  std::vector<Vec> xs;
  const std::size_t n2 = o.dim == 2 ? o.nx : 1;
  for (std::size_t i = 0; i < o.nx; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      const double u = o.nx > 1 ? -o.radius + 2.0 * o.radius * i / (o.nx - 1) : 0.0;
      const double v = o.dim == 2 && o.nx > 1 ? -o.radius + 2.0 * o.radius * j / (o.nx - 1) : 0.0;
      xs.push_back({u, v});
    }
  std::vector<double> ts;
  for (std::size_t k = 0; k < o.nt; ++k) ts.push_back(o.nt > 1 ? o.t_max * k / (o.nt - 1) : 0.0);
  const auto M = evolve_along_curve(*f, P, curve, xs, ts);

  {
    auto os = run.open("_field.json");
    os << provenance_json(*f) << '\n';
  }
  {
    auto os = run.open("_atoms.csv");
    write_atoms_csv(os, *f);
  }
  std::vector<SpaceTimePoint> pts;
  std::vector<cplx> vals;
  double peak = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t k = 0; k < ts.size(); ++k) {
      pts.push_back({xs[i], ts[k]});
      vals.push_back(M(i, k));
      peak = std::max(peak, std::abs(M(i, k)));
    }
  {
    auto os = run.open("_propagator.csv");
    write_propagator_csv(os, o.dim, pts, vals);
  }
  run.metrics["atoms"] = f->size();
  run.metrics["band"] = f->band();
  run.metrics["l1_mass"] = f->l1_mass();
  run.metrics["max_modulus"] = peak;
  run.check("modulus_within_l1_mass", peak <= f->l1_mass() * (1 + 1e-12));
  return 0;
}

struct MaximalOpts {
  std::string symbol = "paraboloid", curve = "power_shift", schedule = "32..256", battery = "all", threshold;
  double m = 2.0, alpha = 0.5, mu1 = 1.0, mu2 = 0.0, p = 2.0, s = 0.25;
  std::uint64_t seed = 7;
};

int run_maximal(const MaximalOpts& o, Run& run) {
  const auto P = make_symbol(o.symbol, o.m);
  const auto curve = make_curve(o.curve, o.mu1, 0.0, o.alpha);
  if (o.mu2 != 0.0) throw CLI::ValidationError("mu2", "maximal scans are one-dimensional");
  const auto lambdas = parse_schedule(o.schedule);
  if (lambdas.size() < 4) throw CLI::ValidationError("lambda-schedule", "need at least 4 scales");
  std::optional<double> threshold;
  if (!o.threshold.empty()) threshold = parse_schedule(o.threshold).front();
  BatteryOptions bo;
  bo.mu = std::abs(o.mu1);
  bo.seed = o.seed;
  if (o.battery != "all") bo.names = split(o.battery);
  const auto battery = witness_battery(bo);

  auto os = run.open("_ratios.csv");
  CsvWriter w(os);
  w.row(std::vector<std::string>{"lambda", "witness", "ratio"});
  std::vector<std::vector<double>> ratios(battery.size());
  std::vector<double> envelope(lambdas.size(), 0.0);
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    for (std::size_t k = 0; k < battery.size(); ++k) {
      run.tick();
      const auto f = battery[k].field(lambdas[i]);
      const double r = operator_ratio(f, P, curve, battery[k].grid(lambdas[i]), o.p, o.s);
      ratios[k].push_back(r);
      envelope[i] = std::max(envelope[i], r);
      w.row(std::vector<std::string>{format_double(lambdas[i]), battery[k].name, format_double(r)});
      os.flush();
    }
  json fits = json::object();
  json flagged = json::array();
  for (std::size_t k = 0; k < battery.size(); ++k) {
    const auto fit = exponent_fit(lambdas, ratios[k]);
    fits[battery[k].name] = fit_json(fit);
    if (threshold && fit.slope > *threshold + 0.15) flagged.push_back(battery[k].name);
  }
  const auto env = exponent_fit(lambdas, envelope);
  json fj{{"witnesses", fits}, {"envelope", fit_json(env)}, {"flagged", flagged}};
  if (threshold) fj["threshold"] = *threshold;
  run.write("_fit.json", fj);
  run.metrics = fj;
  if (threshold) run.check("envelope_reaches_threshold", env.slope >= *threshold - 0.1);
  return 0;
}

struct CubeOpts {
  double m = 2.0, alpha = 0.75, delta1 = 0.3;
  std::string R = "64..2048";
  int dim = 1;
  std::size_t grid_points = 64;
};

int run_cube_rate(const CubeOpts& o, Run& run) {
  const auto Rs = parse_schedule(o.R);
  CubeWitness w;
  w.dim = o.dim;
  w.m = o.m;
  w.alpha = o.alpha;
  const auto rep = cube_rate_exponent(w, o.delta1, Rs, o.grid_points);
  auto os = run.open("_rate.csv");
  CsvWriter c(os);
  c.row(std::vector<std::string>{"R", "l1_norm"});
  for (std::size_t i = 0; i < rep.fit.scales.size(); ++i) c.row(std::vector<double>{rep.fit.scales[i], rep.fit.values[i]});
  run.metrics["regime"] = rep.regime;
  run.metrics["fit"] = fit_json(rep.fit);
  run.metrics["target"] = rep.target;
  run.check("slope_matches_target", std::abs(rep.fit.slope - rep.target) <= (rep.regime == 1 ? 0.1 : 0.15));
  return 0;
}

struct HalfOpts {
  double alpha = 0.5, sign = -1.0;
  std::string lambda = "256..4096";
  std::size_t samples = 256;
};

int run_half_scale(const HalfOpts& o, Run& run) {
  const auto lams = parse_schedule(o.lambda);
  auto os = run.open("_S.csv");
  CsvWriter c(os);
  c.row(std::vector<std::string>{"lambda", "measure", "exact_measure", "reference", "min_modulus", "floor"});
  bool floor_ok = true, window_ok = true;
  for (const double lam : lams) {
    run.tick();
    HalfScaleWitness w{lam, o.alpha, o.sign};
    const auto rep = halfscale_S_set(w, o.samples);
    const double ref = std::pow(lam, -std::min(o.alpha, 0.5));
    c.row(std::vector<double>{lam, rep.measure, rep.exact_measure, ref, rep.min_modulus, rep.floor});
    os.flush();
    floor_ok = floor_ok && rep.bound_holds;
    window_ok = window_ok && rep.measure >= 0.5 * ref && rep.measure <= 4.0 * ref;
  }
  run.check("sup_above_floor", floor_ok);
  run.check("measure_window", window_ok);
  return 0;
}

struct BourgainOpts {
  std::string R = "256..8192";
  std::size_t samples = 256;
  double quantile = 0.75;
  std::uint64_t seed = 1;
};

int run_bourgain(const BourgainOpts& o, Run& run) {
  const auto Rs = parse_schedule(o.R);
  const auto rep = bourgain_growth(Rs, o.samples, o.seed, o.quantile, run.budget);
  auto os = run.open("_growth.csv");
  CsvWriter c(os);
  c.row(std::vector<std::string>{"R", "norm2", "level", "max_modulus", "fraction_above", "measure_above"});
  for (const auto& p : rep.points)
    c.row(std::vector<double>{p.R, p.norm2, p.level, p.max_modulus, p.fraction_above, p.measure_above});
  os.flush();
  if (rep.partial) throw BudgetExceeded("runtime budget exceeded after " + std::to_string(rep.points.size()) + " scales");
  run.metrics["norm_fit"] = fit_json(rep.norm_fit);
  run.metrics["level_fit"] = fit_json(rep.level_fit);
  run.metrics["max_fit"] = fit_json(rep.max_fit);
  run.metrics["s_threshold"] = rep.s_threshold;
  run.check("norm_exponent", std::abs(rep.norm_fit.slope - 5.0 / 12.0) <= 0.02);
  run.check("level_slope", std::abs(rep.level_fit.slope - 0.75) <= 0.1);
  run.check("s_threshold", std::abs(rep.s_threshold - 1.0 / 3.0) <= 0.05);
  return 0;
}

struct SharpOpts {
  double alpha = 0.5, s = -1.0, p_lo = 1.0, p_hi = 12.0, p_step = 0.01;
  std::string lambda = "256..4096";
};

int run_sharp_p(const SharpOpts& o, Run& run) {
  const double s = o.s >= 0.0 ? o.s : std::max(0.5 - o.alpha, 0.25);
  const auto rep = sharp_p_threshold(o.alpha, s, parse_schedule(o.lambda), o.p_lo, o.p_hi, o.p_step);
  auto os = run.open("_differences.csv");
  CsvWriter c(os);
  c.row(std::vector<std::string>{"p", "difference"});
  for (std::size_t i = 0; i < rep.ps.size(); ++i) c.row(std::vector<double>{rep.ps[i], rep.differences[i]});
  run.metrics["s"] = s;
  run.metrics["threshold"] = rep.threshold;
  run.metrics["claim"] = rep.claim;
  run.metrics["saturated"] = rep.saturated;
  run.metrics["measure_fit"] = fit_json(rep.measure_fit);
  run.metrics["norm_fit"] = fit_json(rep.norm_fit);
  run.check("threshold_matches_claim", std::abs(rep.threshold - rep.claim) <= 0.2);
  return 0;
}

struct DimensionOpts {
  std::string set = "sequence", points;
  double a = 0.0, b = 1.0;
  int J = 16, j_lo = 4;
};

int run_dimension(const DimensionOpts& o, Run& run) {
  std::optional<ThetaSet> theta;
  std::optional<double> expected;
  double tol = 0.0;
  if (o.set == "point") {
    theta = ThetaSet::finite({o.a});
    expected = 0.0;
  } else if (o.set == "interval") {
    theta = ThetaSet::interval(o.a, o.b);
    expected = 1.0;
    tol = 0.02;
  } else if (o.set == "sequence") {
    theta = ThetaSet::sequence();
    expected = 0.5;
    tol = 0.1;
  } else if (o.set == "finite") {
    std::vector<double> pts;
    for (const auto& s : split(o.points)) pts.push_back(parse_schedule(s).front());
    if (pts.empty()) throw CLI::ValidationError("points", "finite set needs --points");
    theta = ThetaSet::finite(pts);
    expected = 0.0;
  } else {
    throw CLI::ValidationError("set", "unknown set '" + o.set + "'");
  }
  const auto fit = minkowski_dim(*theta, o.J, o.j_lo);
  auto os = run.open("_covers.csv");
  write_cover_csv(os, fit);
  json fj{{"slope", fit.fit.slope},
          {"r2", fit.fit.r2},
          {"degenerate", fit.degenerate},
          {"j_lo", fit.j_lo},
          {"j_hi", fit.j_hi}};
  run.write("_fit.json", fj);
  run.metrics = fj;
  if (expected) run.check("dimension", tol == 0.0 ? fit.fit.slope == *expected : std::abs(fit.fit.slope - *expected) <= tol);
  return 0;
}

struct RateOpts {
  double m = 2.0, alpha = 0.6, delta = 0.5, h = 0.25, s = 0.25, band = 16.0, resolution = 8.0;
  int schedule = 20, j_lo = 8;
  std::uint64_t seed = 1;
  std::string boundary = "no";
};

int run_rate_scan(const RateOpts& o, Run& run) {
  if (o.boundary != "yes" && o.boundary != "no") throw CLI::ValidationError("boundary", "expected yes or no");
  const auto ts = dyadic_times(o.j_lo, o.schedule);
  FieldRecipe r;
  r.kind = RecipeKind::sobolev_random;
  r.dim = 1;
  r.R = o.band;
  r.resolution = o.resolution;
  r.decay = o.s + o.delta;
  r.seed = o.seed;
  const auto f = make_field(r);
  GridSpec ball;
  ball.dx = std::min(ball.dx, 1.0 / (2.0 * f.band()));
  const auto curve = CurveSpec::power_shift({-1.0, 0.0}, o.alpha);
  const auto prof = rate_profile(f, SymbolSpec::modulus_power(o.m), curve, o.h, ball, ts);
  auto os = run.open("_rate.csv");
  CsvWriter c(os);
  c.row(std::vector<std::string>{"t", "ratio"});
  for (const auto& p : prof) c.row(std::vector<double>{p.t, p.ratio});
  const Region region = region_for(o.m, o.alpha);
  const bool inside = in_region(region, o.delta, o.h, o.m, o.alpha);
  const auto trend = trend_test(prof);
  run.metrics["region"] = region_name(region);
  run.metrics["interior"] = inside;
  run.metrics["decreasing"] = trend.decreasing;
  run.metrics["final_over_initial"] = trend.final_over_initial;
  if (inside) run.check("trend", trend.pass);
  if (o.boundary == "yes") {
    run.tick();
    GridSpec g;
    g.radius = 2.0;
    g.dx = 1.0 / 32.0;
    const auto b = boundary_obstruction(o.alpha, dyadic_times(4, o.schedule), g);
    auto bs = run.open("_boundary.csv");
    CsvWriter bc(bs);
    bc.row(std::vector<std::string>{"t", "ratio"});
    for (const auto& p : b.profile) bc.row(std::vector<double>{p.t, p.ratio});
    run.metrics["boundary_min_ratio"] = b.min_ratio;
    run.metrics["sup_derivative"] = b.sup_derivative;
    run.check("boundary_obstruction", b.pass);
  }
  return 0;
}

struct WaveOpts {
  double R = 256.0, alpha = 0.5, dilation = 2.0, mu1 = 1.0, mu2 = 0.0, delta = 0.05, kappa = 1.15;
  std::size_t tiles = 10;
  std::uint64_t seed = 1;
};

int run_wavepacket(const WaveOpts& o, Run& run) {
  const auto curve = CurveSpec::power_shift({o.mu1, o.mu2}, o.alpha);
  TubeOptions topt;
  topt.delta = o.delta;
  topt.kappa = o.kappa;
  topt.seed = o.seed;
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto os = run.open("_tubes.csv");
  CsvWriter c(os);
  c.row(std::vector<std::string>{"tile", "m_1", "m_2", "n_1", "n_2", "fraction", "closed_form_error"});
  double worst = 1.0;
  const double a = std::sqrt(o.R), b = 1.0 / std::sqrt(o.R);
  for (std::size_t i = 0; i < o.tiles; ++i) {
    run.tick();
    Tile t;
    t.R = o.R;
    const int mr = std::max(1, static_cast<int>(0.2 / b)), nr = std::max(1, static_cast<int>(0.25 * o.R / a));
    t.m = {static_cast<int>(std::lround(mr * U(rng))), static_cast<int>(std::lround(mr * U(rng)))};
    t.n = {static_cast<int>(std::lround(nr * U(rng))), static_cast<int>(std::lround(nr * U(rng)))};
    t.c_theta = {t.m[0] * b, t.m[1] * b};
    t.c_nu = {t.n[0] * a, t.n[1] * a};
    const auto tm = tube_mass(t, curve, o.dilation, topt);
    worst = std::min(worst, tm.fraction);
    c.row(std::vector<std::string>{std::to_string(i), std::to_string(t.m[0]), std::to_string(t.m[1]),
                                   std::to_string(t.n[0]), std::to_string(t.n[1]), format_double(tm.fraction),
                                   format_double(tm.closed_form_error)});
    os.flush();
  }
  // Frame and reconstruction at a small scale.
  FieldRecipe r;
  r.kind = RecipeKind::gaussian;
  r.dim = 2;
  r.sigma = 0.25;
  r.extent = 1.0;
  r.resolution = 16.0;
  const auto f = make_field(r);
  GaborSystem sys;
  sys.R = 16.0;
  const auto dec = decompose(f, sys, 16.0);
  std::vector<Vec> pts;
  for (int i = 0; i < 100; ++i) pts.push_back({12 * U(rng), 12 * U(rng)});
  const auto rec = reconstruct(dec, pts);
  const auto ex = evaluate_field(f, pts);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    num += std::norm(rec[i] - ex[i]);
    den += std::norm(ex[i]);
  }
  const auto fb = frame_bounds(dec.system, 4096, o.seed);
  run.metrics["tube_min_fraction"] = worst;
  run.metrics["tube_radius"] = o.dilation * std::pow(o.R, 0.5 + o.delta);
  run.metrics["reconstruction_rel_err"] = std::sqrt(num / den);
  run.metrics["frame_A"] = fb.A;
  run.metrics["frame_B"] = fb.B;
  run.metrics["energy_over_norm2"] = dec.coef_energy / (dec.norm2 * dec.norm2);
  run.metrics["dropped_tiles"] = dec.dropped;
  run.check("tube_fraction", worst >= 0.99);
  run.check("reconstruction", std::sqrt(num / den) <= 1e-6);
  return 0;
}

struct BroadOpts {
  double K = 2.0, M = 2.0, p = 2.0, q = INFINITY, R = 4.0, resolution = 0.0, field_resolution = 32.0;
  int A = 1;
  std::size_t quad = 2;
  std::uint64_t seed = 1;
};

int run_broad(const BroadOpts& o, Run& run) {
  FieldRecipe r;
  r.kind = RecipeKind::random_annulus;
  r.dim = 2;
  r.R = 1.0;
  r.resolution = o.field_resolution;
  r.seed = o.seed;
  const auto f = make_field(r);
  BroadParams p;
  p.K = o.K;
  p.M = o.M;
  p.A = o.A;
  p.p = o.p;
  p.q = o.q;
  p.resolution = o.resolution;
  BroadDomain dom;
  dom.R = o.R;
  dom.quad = o.quad;
  const auto rep = broad_norm(f, p, dom);
  run.metrics["value"] = rep.value;
  run.metrics["dominating"] = rep.dominating;
  run.metrics["caps"] = rep.caps;
  run.metrics["directions"] = rep.directions;
  run.metrics["masks"] = rep.masks;
  run.metrics["cells"] = rep.cells;
  run.metrics["cap_width"] = rep.cap_width;
  run.metrics["resolution"] = rep.resolution;
  run.check("dominated", rep.value <= rep.dominating);
  if (static_cast<std::size_t>(o.A) >= rep.caps) run.check("all_caps_absorbed", rep.value == 0.0);
  return 0;
}

struct KernelOpts {
  double alpha = 0.5, lambda = 256.0;
  std::string family = "theta-power";
  std::size_t samples = 500;
  std::uint64_t seed = 1;
};

int run_kernel(const KernelOpts& o, Run& run) {
  if (o.family != "theta-power") throw CLI::ValidationError("family", "only theta-power is available");
  EnvelopeConfig cfg;
  cfg.alpha = o.alpha;
  cfg.lambda = o.lambda;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  const auto rep = envelope_check(cfg);
  auto os = run.open("_kernel.csv");
  CsvWriter c(os);
  c.row(std::vector<std::string>{"regime", "dx", "dt", "modulus", "envelope", "ratio"});
  for (const auto& r : rep.rows)
    c.row(std::vector<std::string>{regime_name(r.regime), format_double(r.dx), format_double(r.dt),
                                   format_double(r.modulus), format_double(r.envelope), format_double(r.ratio)});
  run.metrics["e1_worst"] = rep.e1_worst;
  run.metrics["e2_worst"] = rep.e2_worst;
  run.metrics["e2_bound"] = rep.e2_bound;
  run.metrics["e3_C"] = rep.e3_C;
  run.metrics["e3_drift"] = rep.e3_drift;
  run.metrics["far_count"] = rep.far_count;
  run.metrics["sep_count"] = rep.sep_count;
  run.check("E1", rep.e1_pass);
  run.check("E2", rep.e2_pass);
  run.check("E3", rep.e3_pass);
  return 0;
}

struct VerifyOpts {
  std::string form = "power_shift";
  double mu1 = 1.0, mu2 = 0.0, alpha = 0.5, C_alpha = -1.0, theta_lo = 0.5, theta_hi = 1.0;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
};

int run_verify(const VerifyOpts& o, Run& run) {
  ConditionReport rep;
  if (o.form == "theta-power") {
    rep = verify_conditions(CurveFamily::theta_power(o.alpha, ThetaSet::interval(o.theta_lo, o.theta_hi)), o.samples, o.seed);
  } else if (o.form == "vertical") {
    rep = verify_conditions(CurveSpec::vertical(), o.samples, o.seed);
  } else if (o.form == "power_shift") {
    std::optional<double> C;
    if (o.C_alpha >= 0.0) C = o.C_alpha;
    rep = verify_conditions(CurveSpec::power_shift({o.mu1, o.mu2}, o.alpha, C), o.samples, o.seed);
  } else {
    throw CLI::ValidationError("form", "unknown curve form '" + o.form + "'");
  }
  auto os = run.open("_conditions.csv");
  CsvWriter c(os);
  c.row(std::vector<std::string>{"condition", "worst", "declared", "pass"});
  for (const auto& k : rep.conditions) {
    c.row(std::vector<std::string>{k.name, format_double(k.worst), format_double(k.declared), k.pass ? "true" : "false"});
    run.metrics[k.name] = k.worst;
    run.check(k.name, k.pass);
  }
  return 0;
}

// Rewrites a config file into an argument vector.
std::vector<std::string> config_args(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw CLI::ValidationError("config", "cannot read " + path);
  const std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw CLI::ValidationError("config", path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("command") || !j["command"].is_array())
    throw CLI::ValidationError("config", path + ": field 'command' must be an array of strings");
  std::vector<std::string> args;
  for (const auto& c : j["command"]) {
    if (!c.is_string()) throw CLI::ValidationError("config", path + ": field 'command' must hold strings");
    args.push_back(c.get<std::string>());
  }
  if (j.contains("options")) {
    if (!j["options"].is_object()) throw CLI::ValidationError("config", path + ": field 'options' must be an object");
    for (const auto& [k, v] : j["options"].items()) {
      if (!v.is_string() && !v.is_number())
        throw CLI::ValidationError("config", path + ": field 'options." + k + "' must be a string or number");
      args.push_back("--" + k);
      args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (!args.empty() && args.front() == "run") args.erase(args.begin());

  CLI::App app{"Numerical laboratory for Schroedinger maximal estimates along tangential curves"};
  app.require_subcommand(0, 1);
  std::string config, out;
  unsigned workers = 0;
  double budget = 0.0;
  app.add_option("--config", config, "resolved config JSON to replay");

  std::vector<std::unique_ptr<Command>> commands;
  auto add = [&](CLI::App* parent, const std::string& name, const std::string& help, std::vector<std::string> path) {
    auto c = std::make_unique<Command>();
    c->app = parent->add_subcommand(name, help);
    c->app->set_help_flag("--help", "print this help message and exit");
    c->app->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    c->path = std::move(path);
    c->opt("out", out, "output prefix");
    c->options.pop_back();  // the prefix is not part of the echoed inputs
    c->app->add_option("--workers", workers, "worker threads (0 = all cores)");
    c->app->add_option("--budget", budget, "runtime budget in seconds (0 = none)");
    commands.push_back(std::move(c));
    return commands.back().get();
  };

  PropagateOpts po;
  {
    auto* c = add(&app, "propagate", "evaluate e^{itP(D)}f along a curve", {"propagate"});
    c->opt("recipe", po.recipe, "cube|ball|gaussian|random_annulus|sobolev_random");
    c->opt("atoms", po.atoms, "atom CSV (xi_1, xi_2, weight, re_c, im_c) instead of a recipe");
    c->opt("dim", po.dim, "1 or 2");
    c->opt("band", po.band, "recipe size parameter");
    c->opt("sigma", po.sigma, "gaussian width");
    c->opt("extent", po.extent, "gaussian truncation");
    c->opt("resolution", po.resolution, "nodes per unit frequency");
    c->opt("seed", po.seed, "recipe seed");
    c->opt("symbol", po.symbol, "paraboloid|modulus_power|first_coordinate_power");
    c->opt("m", po.m, "symbol order");
    c->opt("curve", po.curve, "vertical|power_shift");
    c->opt("mu1", po.mu1, "curve displacement, first component");
    c->opt("mu2", po.mu2, "curve displacement, second component");
    c->opt("alpha", po.alpha, "curve exponent");
    c->opt("radius", po.radius, "half-width of the x grid");
    c->opt("nx", po.nx, "x samples per axis");
    c->opt("t-max", po.t_max, "largest time");
    c->opt("nt", po.nt, "time samples");
  }
  MaximalOpts mo;
  {
    auto* c = add(&app, "maximal-scan", "witness battery scan of the maximal operator", {"maximal-scan"});
    c->opt("symbol", mo.symbol, "paraboloid|modulus_power|first_coordinate_power");
    c->opt("m", mo.m, "symbol order");
    c->opt("curve", mo.curve, "vertical|power_shift");
    c->opt("mu", mo.mu1, "curve displacement");
    c->opt("alpha", mo.alpha, "curve exponent");
    c->opt("p", mo.p, "Lebesgue exponent");
    c->opt("s", mo.s, "Sobolev exponent");
    c->opt("lambda-schedule", mo.schedule, "e.g. 64..1024 or 64,128,256,512");
    c->opt("battery", mo.battery, "comma-separated witness names or 'all'");
    c->opt("threshold", mo.threshold, "slope threshold for the envelope check");
    c->opt("seed", mo.seed, "battery seed");
  }
  auto* cx = app.add_subcommand("counterexample", "counterexample constructions");
  cx->require_subcommand(1);
  CubeOpts co;
  {
    auto* c = add(cx, "cube-rate", "cube witness rate exponent", {"counterexample", "cube-rate"});
    c->opt("m", co.m, "symbol order");
    c->opt("alpha", co.alpha, "curve exponent");
    c->opt("delta1", co.delta1, "rate exponent delta_1");
    c->opt("R", co.R, "R schedule");
    c->opt("dim", co.dim, "1 or 2");
    c->opt("grid-points", co.grid_points, "x samples per axis");
  }
  HalfOpts ho;
  {
    auto* c = add(cx, "half-scale", "half-scale ball witness and its set S", {"counterexample", "half-scale"});
    c->opt("alpha", ho.alpha, "curve exponent");
    c->opt("sign", ho.sign, "curve direction, x + sign t^alpha");
    c->opt("lambda", ho.lambda, "lambda schedule");
    c->opt("samples", ho.samples, "members of S evaluated (0 = all)");
  }
  BourgainOpts bo;
  {
    auto* c = add(cx, "bourgain", "strip construction growth", {"counterexample", "bourgain"});
    c->opt("R", bo.R, "R schedule");
    c->opt("samples", bo.samples, "x samples in B(0,1)");
    c->opt("quantile", bo.quantile, "quantile of sup_t used as the level");
    c->opt("seed", bo.seed, "sample seed");
  }
  SharpOpts so;
  {
    auto* c = add(cx, "sharp-p", "largest admissible p from the half-scale witness", {"counterexample", "sharp-p"});
    c->opt("alpha", so.alpha, "curve exponent");
    c->opt("s", so.s, "Sobolev exponent (negative = max(1/2 - alpha, 1/4))");
    c->opt("lambda", so.lambda, "lambda schedule");
    c->opt("p-lo", so.p_lo, "grid start");
    c->opt("p-hi", so.p_hi, "grid end");
    c->opt("p-step", so.p_step, "grid step");
  }
  DimensionOpts dop;
  {
    auto* c = add(&app, "dimension", "box-counting Minkowski dimension", {"dimension"});
    c->opt("set", dop.set, "point|interval|sequence|finite");
    c->opt("points", dop.points, "finite set members, comma-separated");
    c->opt("a", dop.a, "point or interval start");
    c->opt("b", dop.b, "interval end");
    c->opt("J", dop.J, "finest scale 2^-J");
    c->opt("j-lo", dop.j_lo, "coarsest scale 2^-j_lo");
  }
  RateOpts ro;
  {
    auto* c = add(&app, "rate-scan", "convergence-rate quotient along a dyadic schedule", {"rate-scan"});
    c->opt("m", ro.m, "symbol order");
    c->opt("alpha", ro.alpha, "curve exponent");
    c->opt("delta", ro.delta, "extra smoothness");
    c->opt("h", ro.h, "rate exponent");
    c->opt("s", ro.s, "base Sobolev exponent");
    c->opt("band", ro.band, "frequency band");
    c->opt("resolution", ro.resolution, "nodes per unit frequency");
    c->opt("schedule", ro.schedule, "finest scale J (t = 2^-J)");
    c->opt("j-lo", ro.j_lo, "coarsest scale");
    c->opt("seed", ro.seed, "field seed");
    c->opt("boundary", ro.boundary, "yes|no: also run the h = alpha obstruction");
  }
  WaveOpts wo;
  {
    auto* c = add(&app, "wavepacket-check", "tube localization and frame reconstruction", {"wavepacket-check"});
    c->opt("R", wo.R, "scale");
    c->opt("alpha", wo.alpha, "curve exponent");
    c->opt("dilation", wo.dilation, "tube dilation factor");
    c->opt("mu1", wo.mu1, "curve displacement, first component");
    c->opt("mu2", wo.mu2, "curve displacement, second component");
    c->opt("delta", wo.delta, "tube fattening exponent");
    c->opt("kappa", wo.kappa, "packet window width in units of R^{1/2}");
    c->opt("tiles", wo.tiles, "random tiles");
    c->opt("seed", wo.seed, "tile seed");
  }
  BroadOpts bro;
  {
    auto* c = add(&app, "broad-norm", "broad norm of a random annulus field", {"broad-norm"});
    c->opt("K", bro.K, "cell size and cap parameter");
    c->opt("M", bro.M, "cap parameter");
    c->opt("A", bro.A, "number of lines in the minimum");
    c->opt("p", bro.p, "inner exponent");
    c->opt("q", bro.q, "time-block exponent (inf = sup)");
    c->opt("R", bro.R, "domain radius");
    c->opt("resolution", bro.resolution, "direction grid in radians (0 = default)");
    c->opt("field-resolution", bro.field_resolution, "nodes per unit frequency");
    c->opt("quad", bro.quad, "quadrature points per axis per cell");
    c->opt("seed", bro.seed, "field seed");
  }
  KernelOpts ko;
  {
    auto* c = add(&app, "kernel-check", "kernel envelope bounds", {"kernel-check"});
    c->opt("alpha", ko.alpha, "family exponent");
    c->opt("lambda", ko.lambda, "frequency scale");
    c->opt("family", ko.family, "theta-power");
    c->opt("samples", ko.samples, "samples per regime");
    c->opt("seed", ko.seed, "sample seed");
  }
  VerifyOpts vo;
  {
    auto* c = add(&app, "verify-curve", "check anchoring and Hoelder/(C1)-(C3) conditions", {"verify-curve"});
    c->opt("form", vo.form, "vertical|power_shift|theta-power");
    c->opt("mu1", vo.mu1, "displacement, first component");
    c->opt("mu2", vo.mu2, "displacement, second component");
    c->opt("alpha", vo.alpha, "exponent");
    c->opt("C-alpha", vo.C_alpha, "declared Hoelder constant (negative = |mu|)");
    c->opt("theta-lo", vo.theta_lo, "family parameter interval start");
    c->opt("theta-hi", vo.theta_hi, "family parameter interval end");
    c->opt("samples", vo.samples, "random samples");
    c->opt("seed", vo.seed, "sample seed");
  }

  const std::map<std::string, std::function<int(Run&)>> bodies{
      {"propagate", [&](Run& r) { return run_propagate(po, r); }},
      {"maximal-scan", [&](Run& r) { return run_maximal(mo, r); }},
      {"counterexample cube-rate", [&](Run& r) { return run_cube_rate(co, r); }},
      {"counterexample half-scale", [&](Run& r) { return run_half_scale(ho, r); }},
      {"counterexample bourgain", [&](Run& r) { return run_bourgain(bo, r); }},
      {"counterexample sharp-p", [&](Run& r) { return run_sharp_p(so, r); }},
      {"dimension", [&](Run& r) { return run_dimension(dop, r); }},
      {"rate-scan", [&](Run& r) { return run_rate_scan(ro, r); }},
      {"wavepacket-check", [&](Run& r) { return run_wavepacket(wo, r); }},
      {"broad-norm", [&](Run& r) { return run_broad(bro, r); }},
      {"kernel-check", [&](Run& r) { return run_kernel(ko, r); }},
      {"verify-curve", [&](Run& r) { return run_verify(vo, r); }},
  };

  auto parse = [&](std::vector<std::string> a) {
    std::reverse(a.begin(), a.end());
    app.parse(a);
  };
  Command* cmd = nullptr;
  try {
    // --config expands in place; flags after it override the stored options.
    for (auto it = args.begin(); it != args.end(); ++it) {
      std::string file;
      if (*it == "--config" && std::next(it) != args.end()) {
        file = *std::next(it);
        it = args.erase(it, std::next(it, 2));
      } else if (it->rfind("--config=", 0) == 0) {
        file = it->substr(9);
        it = args.erase(it);
      } else {
        continue;
      }
      auto replay = config_args(file);
      replay.insert(replay.end(), it, args.end());
      args.erase(it, args.end());
      args.insert(args.end(), replay.begin(), replay.end());
      break;
    }
    parse(args);
    for (auto& c : commands)
      if (c->app->parsed()) cmd = c.get();
    if (!cmd) throw CLI::CallForHelp();
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  set_worker_count(workers);
  Run run;
  run.budget = budget;
  std::string prefix = out.empty() ? cmd->path.back() : out;
  if (const char* dir = std::getenv("TANGLAB_OUTPUT_DIR"); dir && *dir)
    prefix = (std::filesystem::path(dir) / std::filesystem::path(prefix).filename()).string();
  run.prefix = prefix;

  const json inputs = cmd->inputs();
  const std::string kind = cmd->kind();
  auto summary = [&](bool partial) {
    json s;
    s["kind"] = kind;
    s["inputs"] = inputs;
    s["metrics"] = run.metrics;
    s["metrics"]["partial"] = partial;
    s["metrics"]["seconds"] = run.elapsed();
    s["pass"] = json{{"all", !partial && run.all_pass()}, {"checks", run.checks}};
    run.write("_summary.json", s);
  };
  try {
    if (const auto parent = std::filesystem::path(prefix).parent_path(); !parent.empty())
      std::filesystem::create_directories(parent);
    run.write("_config.json", json{{"command", cmd->path}, {"options", inputs}});
    bodies.at(kind)(run);
    summary(false);
  } catch (const BudgetExceeded& e) {
    std::cerr << "tanglab: " << e.what() << '\n';
    summary(true);
    return 3;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "tanglab: " << e.what() << '\n';
    run.discard();
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "tanglab: configuration error: " << e.what() << '\n';
    run.discard();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "tanglab: " << e.what() << '\n';
    return 1;
  }
  std::cout << run.path("_summary.json") << '\n';
  return run.all_pass() ? 0 : 1;
}
