#include "tanglab/wavepacket.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "tanglab/parallel.hpp"
#include "tanglab/propagator.hpp"

namespace tanglab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Windows are negligible (< e^-40) beyond this many widths.
constexpr double kReach = 9.0;

// 2 pi ghat(omega) for the unnormalized window g(u) = exp(-u^2 / 2 s^2).
double window_hat(double s, double omega) { return s * std::sqrt(kTwoPi) * std::exp(-0.5 * s * s * omega * omega); }

struct AxisIndex {
  int m = 0, n = 0;
};

// Displacement R (gamma(x/R, t/R^2) - x/R) of the rescaled curve.
Vec rescaled_shift(const CurveSpec& curve, double R, const Vec& x, double t) {
  const Vec xr{x[0] / R, x[1] / R};
  const Vec g = eval_curve(curve, xr, t / (R * R));
  return {R * (g[0] - xr[0]), R * (g[1] - xr[1])};
}

double axis_modulus(double s, double x0, double k, double x, double t) {
  const double A2 = 0.25 * s * s * s * s + t * t;  // |s^2/2 - it|^2
  const double y = x - x0 + 2.0 * t * k;
  return (s / std::sqrt(kTwoPi)) * std::sqrt(std::numbers::pi / std::sqrt(A2)) *
         std::exp(-y * y * (0.5 * s * s) / (4.0 * A2));
}

}  // namespace

double GaborSystem::G0(double u) const {
  const double A = a(), S = s();
  const int K = static_cast<int>(std::ceil(kReach * S / A)) + 1;
  const int c = static_cast<int>(std::floor(u / A));
  double sum = 0.0;
  for (int n = c - K; n <= c + K; ++n) {
    const double d = u - n * A;
    sum += std::exp(-d * d / (S * S));
  }
  return sum;
}

double GaborSystem::frame_density(const Vec& x) const {
  double v = 1.0;
  for (int i = 0; i < dim; ++i) v *= (kTwoPi / b()) * G0(x[i]);
  return v;
}

cplx GaborSystem::atom(const std::array<int, 2>& m, const std::array<int, 2>& n, const Vec& x) const {
  cplx v(1.0, 0.0);
  const double S = s();
  for (int i = 0; i < dim; ++i) {
    const double u = x[i] - n[i] * a();
    v *= std::exp(-u * u / (2.0 * S * S)) * std::polar(1.0, m[i] * b() * u);
  }
  return v;
}

Decomposition decompose(const BandlimitedField& f, const GaborSystem& sys_in, double spatial_radius) {
  Decomposition out;
  out.system = sys_in;
  out.system.dim = f.dim();
  const GaborSystem& sys = out.system;
  const int dim = sys.dim;
  const double a = sys.a(), b = sys.b(), s = sys.s();
  out.spatial_radius = spatial_radius > 0.0 ? spatial_radius : sys.R;

  double mass = 0.0;
  double lo[2] = {0.0, 0.0}, hi[2] = {0.0, 0.0};
  bool first = true;
  for (const auto& at : f.atoms()) {
    mass += at.w * std::norm(at.c);
    for (int i = 0; i < dim; ++i) {
      lo[i] = first ? at.xi[i] : std::min(lo[i], at.xi[i]);
      hi[i] = first ? at.xi[i] : std::max(hi[i], at.xi[i]);
    }
    first = false;
  }
  out.norm2 = std::sqrt(std::pow(kTwoPi, dim) * mass);
  if (f.size() == 0) return out;

  // Per-axis (m, n) ranges: frequencies within kReach/s of the data, centres
  // within the window reach of the tiled region.
  const double reach = out.spatial_radius + kReach * s;
  const int n_hi = static_cast<int>(std::floor(reach / a));
  std::vector<AxisIndex> axis[2];
  for (int i = 0; i < dim; ++i) {
    const int m_lo = static_cast<int>(std::floor((lo[i] - kReach / s) / b));
    const int m_hi = static_cast<int>(std::ceil((hi[i] + kReach / s) / b));
    for (int n = -n_hi; n <= n_hi; ++n)
      for (int m = m_lo; m <= m_hi; ++m) axis[i].push_back({m, n});
  }
  if (dim == 1) axis[1].push_back({0, 0});

  auto factor = [&](const AxisIndex& k, double xi) { return window_hat(s, xi - k.m * b) * std::polar(1.0, xi * k.n * a); };

  // Group atoms by xi_1; V[u][k2] = sum over the group of w c F_2(k2; xi_2).
  std::map<double, std::size_t> groups;
  for (const auto& at : f.atoms()) groups.emplace(at.xi[0], groups.size());
  std::vector<double> us(groups.size());
  for (const auto& [u, idx] : groups) us[idx] = u;
  const std::size_t n2 = axis[1].size();
  std::vector<cplx> V(us.size() * n2, cplx(0.0, 0.0));
  for (const auto& at : f.atoms()) {
    cplx* row = &V[groups.at(at.xi[0]) * n2];
    const cplx wc = at.w * at.c;
    for (std::size_t k = 0; k < n2; ++k) row[k] += wc * (dim == 1 ? cplx(1.0, 0.0) : factor(axis[1][k], at.xi[1]));
  }

  const std::size_t n1 = axis[0].size();
  std::vector<cplx> coef(n1 * n2, cplx(0.0, 0.0));
  parallel_for(n1, [&](std::size_t k1) {
    cplx* dst = &coef[k1 * n2];
    for (std::size_t g = 0; g < us.size(); ++g) {
      const double d = us[g] - axis[0][k1].m * b;
      if (std::abs(d) * s > kReach) continue;
      const cplx F = factor(axis[0][k1], us[g]);
      const cplx* src = &V[g * n2];
      for (std::size_t k2 = 0; k2 < n2; ++k2) dst[k2] += F * src[k2];
    }
  });

  // Emit tiles grouped by spatial index so synthesis can skip distant centres.
  const double cut = 1e-12 * out.norm2;
  std::map<std::pair<int, int>, std::vector<std::pair<std::size_t, std::size_t>>> by_n;
  for (std::size_t k1 = 0; k1 < n1; ++k1)
    for (std::size_t k2 = 0; k2 < n2; ++k2) {
      const Vec c{axis[0][k1].n * a, dim == 2 ? axis[1][k2].n * a : 0.0};
      if (norm(c) > reach) continue;
      by_n[{axis[0][k1].n, axis[1][k2].n}].push_back({k1, k2});
    }
  for (const auto& [n, members] : by_n)
    for (const auto& [k1, k2] : members) {
      const cplx v = coef[k1 * n2 + k2];
      out.coef_energy += std::norm(v);
      if (std::abs(v) < cut) {
        ++out.dropped;
        continue;
      }
      Tile t;
      t.m = {axis[0][k1].m, axis[1][k2].m};
      t.n = {n.first, n.second};
      t.c_theta = {t.m[0] * b, t.m[1] * b};
      t.c_nu = {t.n[0] * a, t.n[1] * a};
      t.R = sys.R;
      out.tiles.push_back(t);
      out.coefficients.push_back(v);
    }
  return out;
}

std::vector<cplx> reconstruct(const Decomposition& d, const std::vector<Vec>& points) {
  const GaborSystem& sys = d.system;
  const double a = sys.a(), s = sys.s();
  struct Run {
    std::array<int, 2> n;
    std::size_t begin, end;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < d.tiles.size(); ++i) {
    if (runs.empty() || runs.back().n != d.tiles[i].n) runs.push_back({d.tiles[i].n, i, i});
    runs.back().end = i + 1;
  }
  int m_lo[2] = {0, 0}, m_hi[2] = {0, 0};
  for (std::size_t i = 0; i < d.tiles.size(); ++i)
    for (int ax = 0; ax < 2; ++ax) {
      m_lo[ax] = i == 0 ? d.tiles[i].m[ax] : std::min(m_lo[ax], d.tiles[i].m[ax]);
      m_hi[ax] = i == 0 ? d.tiles[i].m[ax] : std::max(m_hi[ax], d.tiles[i].m[ax]);
    }
  std::vector<cplx> out(points.size());
  parallel_for(points.size(), [&](std::size_t p) {
    const Vec& x = points[p];
    std::vector<cplx> phase[2];
    for (int ax = 0; ax < 2; ++ax) phase[ax].resize(static_cast<std::size_t>(m_hi[ax] - m_lo[ax] + 1));
    KahanSum acc;
    for (const auto& r : runs) {
      bool near = true;
      for (int i = 0; i < sys.dim; ++i)
        if (std::abs(x[i] - r.n[i] * a) > kReach * s) near = false;
      if (!near) continue;
      double env = 1.0;
      for (int ax = 0; ax < 2; ++ax) {
        const double u = ax < sys.dim ? x[ax] - r.n[ax] * a : 0.0;
        env *= std::exp(-u * u / (2.0 * s * s));
        for (int m = m_lo[ax]; m <= m_hi[ax]; ++m) phase[ax][m - m_lo[ax]] = std::polar(1.0, m * sys.b() * u);
      }
      for (std::size_t k = r.begin; k < r.end; ++k) {
        const auto& m = d.tiles[k].m;
        const cplx v = d.coefficients[k] * env * phase[0][m[0] - m_lo[0]] * phase[1][m[1] - m_lo[1]];
        acc.add(v.real(), v.imag());
      }
    }
    out[p] = acc.value() / sys.frame_density(x);
  });
  return out;
}

FrameBounds frame_bounds(const GaborSystem& sys, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw ConfigError("frame_bounds needs at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, sys.a());
  FrameBounds fb;
  for (std::size_t i = 0; i < samples; ++i) {
    Vec x{U(rng), sys.dim == 2 ? U(rng) : 0.0};
    const double v = sys.frame_density(x);
    fb.A = i == 0 ? v : std::min(fb.A, v);
    fb.B = i == 0 ? v : std::max(fb.B, v);
  }
  return fb;
}

double packet_modulus(const Tile& tile, double kappa, const Vec& x, double t) {
  const double s = kappa * std::sqrt(tile.R);
  return axis_modulus(s, tile.c_nu[0], tile.c_theta[0], x[0], t) * axis_modulus(s, tile.c_nu[1], tile.c_theta[1], x[1], t);
}

TubeMass tube_mass(const Tile& tile, const CurveSpec& curve, double dilation, const TubeOptions& opt) {
  const double R = tile.R;
  if (R < 64.0) throw PreconditionError("tube_mass needs R >= 2^6");
  if (!(dilation > 0.0)) throw ConfigError("tube dilation must be positive");
  if (opt.space_steps == 0 || opt.time_steps == 0) throw ConfigError("tube grid needs positive step counts");
  if (!verify_conditions(curve, 256, opt.seed).pass) throw PreconditionError("curve failed verification");

  TubeMass out;
  out.delta = opt.delta;
  out.dilation = dilation;
  out.radius = dilation * std::pow(R, 0.5 + opt.delta);

  const std::size_t nx = opt.space_steps, nt = opt.time_steps;
  const double hx = 2.0 * R / static_cast<double>(nx), ht = R / static_cast<double>(nt);
  std::vector<Vec> xs;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < nx; ++j) {
      const Vec x{-R + (i + 0.5) * hx, -R + (j + 0.5) * hx};
      if (norm(x) <= R) xs.push_back(x);
    }
  std::vector<double> inside(nt, 0.0), total(nt, 0.0);
  parallel_for(nt, [&](std::size_t k) {
    const double t = (k + 0.5) * ht;
    double in = 0.0, all = 0.0;
    for (const auto& x : xs) {
      const Vec sh = rescaled_shift(curve, R, x, t);
      const double v = packet_modulus(tile, opt.kappa, {x[0] + sh[0], x[1] + sh[1]}, t);
      const double e = v * v;
      all += e;
      const Vec rel{x[0] - tile.c_nu[0] + 2.0 * t * tile.c_theta[0], x[1] - tile.c_nu[1] + 2.0 * t * tile.c_theta[1]};
      if (norm(rel) <= out.radius) in += e;
    }
    inside[k] = in;
    total[k] = all;
  });
  double in = 0.0, all = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    in += inside[k];
    all += total[k];
  }
  out.fraction = all > 0.0 ? std::clamp(in / all, 0.0, 1.0) : 0.0;

  // Cross-check the closed form against direct quadrature of the 1D packet.
  const double s = opt.kappa * std::sqrt(R);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0), T(0.0, R);
  for (int axis = 0; axis < 2 && opt.verify_samples > 0; ++axis) {
    const double k = tile.c_theta[axis], x0 = tile.c_nu[axis];
    const double band = std::abs(k) + kReach / s;
    const double h = 0.5 / (3.0 * R + std::abs(x0) + 2.0 * R * band);
    const int N = static_cast<int>(std::ceil(2.0 * kReach / s / h));
    const double hh = 2.0 * kReach / s / N;
    std::vector<FrequencyAtom> atoms;
    for (int i = 0; i < N; ++i) {
      const double xi = k - kReach / s + (i + 0.5) * hh;
      atoms.push_back({{xi, 0.0}, hh, (s / std::sqrt(kTwoPi)) * std::exp(-0.5 * s * s * (xi - k) * (xi - k)) * std::polar(1.0, -xi * x0)});
    }
    const BandlimitedField g(1, std::move(atoms));
    std::vector<SpaceTimePoint> pts;
    for (std::size_t i = 0; i < opt.verify_samples; ++i) {
      const double t = T(rng);
      const double centre = x0 - 2.0 * t * k;
      pts.push_back({{centre + 3.0 * s * U(rng), 0.0}, t});
    }
    const auto v = evolve(g, SymbolSpec::paraboloid(), pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double t = pts[i].t;
      const double peak = axis_modulus(s, 0.0, 0.0, 0.0, t);
      const double cf = axis_modulus(s, x0, k, pts[i].x[0], t);
      out.closed_form_error = std::max(out.closed_form_error, std::abs(std::abs(v[i]) - cf) / peak);
    }
  }
  return out;
}

double broad_cell_min(const std::vector<double>& cap_values, const std::vector<std::vector<bool>>& masks, int A) {
  const std::size_t nc = cap_values.size();
  if (nc == 0) return 0.0;
  std::vector<std::vector<std::size_t>> holders(nc);  // masks containing each cap
  for (std::size_t d = 0; d < masks.size(); ++d)
    for (std::size_t c = 0; c < nc && c < masks[d].size(); ++c)
      if (masks[d][c]) holders[c].push_back(d);

  std::vector<std::size_t> order(nc);
  for (std::size_t c = 0; c < nc; ++c) order[c] = c;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return cap_values[x] > cap_values[y]; });

  // Can caps order[0..j) be covered by at most `left` masks?
  std::vector<int> cover(nc, 0);
  std::function<bool(std::size_t, int)> coverable = [&](std::size_t j, int left) {
    std::size_t first = j;
    for (std::size_t i = 0; i < j; ++i)
      if (cover[order[i]] == 0) {
        first = i;
        break;
      }
    if (first == j) return true;
    if (left == 0) return false;
    for (const std::size_t d : holders[order[first]]) {
      for (std::size_t c = 0; c < nc; ++c)
        if (masks[d][c]) ++cover[c];
      const bool ok = coverable(j, left - 1);
      for (std::size_t c = 0; c < nc; ++c)
        if (masks[d][c]) --cover[c];
      if (ok) return true;
    }
    return false;
  };
  for (std::size_t j = 1; j <= nc; ++j)
    if (!coverable(j, A)) return cap_values[order[j - 1]];
  return 0.0;
}

BroadReport broad_norm(const BandlimitedField& f, const BroadParams& prm, const BroadDomain& dom) {
  if (f.dim() != 2) throw UsageError("broad_norm works on 2D fields");
  if (!(prm.K > 1.0) || !(prm.M >= 1.0) || prm.A < 1 || !(prm.p >= 1.0) || !(prm.q >= 1.0))
    throw ConfigError("broad_norm needs K > 1, M >= 1, A >= 1, p, q >= 1");
  if (!(dom.R > 0.0) || dom.quad == 0) throw ConfigError("broad_norm domain needs R > 0 and quad >= 1");
  BroadReport out;
  const double w = 1.0 / (prm.K * prm.M);
  if (w > 1.0) throw ConfigError("cap width (KM)^-1 must be <= 1");
  const double res = prm.resolution > 0.0 ? prm.resolution : std::min(w / 4.0, std::numbers::pi / 360.0);
  if (res > w) throw ConfigError("direction grid coarser than the cap width");
  out.cap_width = w;
  out.resolution = res;

  // Caps
  std::map<std::pair<long, long>, std::vector<FrequencyAtom>> cap_atoms;
  for (const auto& at : f.atoms())
    cap_atoms[{static_cast<long>(std::floor(at.xi[0] / w)), static_cast<long>(std::floor(at.xi[1] / w))}].push_back(at);
  std::vector<BandlimitedField> caps;
  std::vector<Vec> corner;
  for (auto& [key, atoms] : cap_atoms) {
    corner.push_back({key.first * w, key.second * w});
    caps.emplace_back(2, std::move(atoms), f.provenance());
  }
  const std::size_t nc = caps.size();
  out.caps = nc;

  // Directions on the upper hemisphere; a cap joins a line when some normal
  // (-2 xi, 1)/|.| over the cap lies within angle w of it.
  const int probe = 9;
  std::vector<std::vector<std::array<double, 3>>> normals(nc);
  std::vector<std::array<double, 3>> centre(nc);
  auto unit_normal = [](double x, double y) {
    const double l = std::sqrt(4.0 * x * x + 4.0 * y * y + 1.0);
    return std::array<double, 3>{-2.0 * x / l, -2.0 * y / l, 1.0 / l};
  };
  for (std::size_t c = 0; c < nc; ++c) {
    centre[c] = unit_normal(corner[c][0] + 0.5 * w, corner[c][1] + 0.5 * w);
    for (int i = 0; i < probe; ++i)
      for (int j = 0; j < probe; ++j)
        normals[c].push_back(unit_normal(corner[c][0] + w * i / (probe - 1), corner[c][1] + w * j / (probe - 1)));
  }
  auto line_angle = [](const std::array<double, 3>& u, const std::array<double, 3>& v) {
    return std::acos(std::min(1.0, std::abs(u[0] * v[0] + u[1] * v[1] + u[2] * v[2])));
  };
  std::set<std::vector<bool>> distinct;
  const int n_polar = static_cast<int>(std::ceil(0.5 * std::numbers::pi / res));
  for (int ip = 0; ip <= n_polar; ++ip) {
    const double th = 0.5 * std::numbers::pi * ip / n_polar;
    const int n_az = ip == 0 ? 1 : static_cast<int>(std::ceil(kTwoPi * std::sin(th) / res));
    for (int ia = 0; ia < n_az; ++ia) {
      const double ph = kTwoPi * ia / n_az;
      const std::array<double, 3> v{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
      ++out.directions;
      std::vector<bool> mask(nc, false);
      bool any = false;
      for (std::size_t c = 0; c < nc; ++c) {
        if (line_angle(centre[c], v) > 3.3 * w) continue;
        for (const auto& nrm : normals[c])
          if (line_angle(nrm, v) <= w) {
            mask[c] = true;
            any = true;
            break;
          }
      }
      if (any) distinct.insert(std::move(mask));
    }
  }
  // Keep only masks not contained in another.
  std::vector<std::vector<bool>> all(distinct.begin(), distinct.end()), masks;
  auto subset = [&](const std::vector<bool>& x, const std::vector<bool>& y) {
    for (std::size_t c = 0; c < nc; ++c)
      if (x[c] && !y[c]) return false;
    return true;
  };
  for (std::size_t i = 0; i < all.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < all.size() && !dominated; ++j)
      if (j != i && subset(all[i], all[j]) && (all[i] != all[j])) dominated = true;
    if (!dominated) masks.push_back(all[i]);
  }
  out.masks = masks.size();

  // Cells: K-squares centred in B(0,R) times K-intervals of [0,R].
  const double R = dom.R, K = prm.K;
  const int nb = static_cast<int>(std::ceil(2.0 * R / K));
  std::vector<Vec> blocks;
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) {
      const Vec c{-R + (i + 0.5) * K, -R + (j + 0.5) * K};
      if (norm(c) <= R) blocks.push_back(c);
    }
  const int nj = static_cast<int>(std::ceil(R / K));
  const std::size_t q3 = dom.quad * dom.quad * dom.quad;
  std::vector<SpaceTimePoint> pts;
  std::vector<double> vol;
  for (const auto& b : blocks)
    for (int j = 0; j < nj; ++j) {
      const double t0 = j * K, t1 = std::min(R, (j + 1) * K);
      const double hs = K / dom.quad, ht = (t1 - t0) / dom.quad;
      vol.push_back(hs * hs * ht);
      for (std::size_t a = 0; a < dom.quad; ++a)
        for (std::size_t c = 0; c < dom.quad; ++c)
          for (std::size_t k = 0; k < dom.quad; ++k) {
            const Vec y{b[0] - 0.5 * K + (a + 0.5) * hs, b[1] - 0.5 * K + (c + 0.5) * hs};
            const double t = t0 + (k + 0.5) * ht;
            const Vec sh = rescaled_shift(dom.curve, R, y, t);
            pts.push_back({{y[0] + sh[0], y[1] + sh[1]}, t});
          }
    }
  const std::size_t ncell = blocks.size() * nj;
  out.cells = ncell;
  std::vector<std::vector<double>> value(ncell, std::vector<double>(nc, 0.0));
  for (std::size_t c = 0; c < nc; ++c) {
    const auto v = evolve(caps[c], SymbolSpec::paraboloid(), pts);
    for (std::size_t cell = 0; cell < ncell; ++cell) {
      double sum = 0.0;
      for (std::size_t i = 0; i < q3; ++i) sum += std::pow(std::abs(v[cell * q3 + i]), prm.p);
      value[cell][c] = sum * vol[cell];
    }
  }
  std::vector<double> mu(ncell), full(ncell);
  parallel_for(ncell, [&](std::size_t cell) {
    mu[cell] = broad_cell_min(value[cell], masks, prm.A);
    double s = 0.0;
    for (const double v : value[cell]) s += v;
    full[cell] = s;
  });
  auto assemble = [&](const std::vector<double>& m) {
    double total = 0.0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      double agg = 0.0;
      for (int j = 0; j < nj; ++j) {
        const double v = m[b * nj + j];
        agg = std::isinf(prm.q) ? std::max(agg, v) : agg + std::pow(v, prm.q);
      }
      total += std::isinf(prm.q) ? agg : std::pow(agg, 1.0 / prm.q);
    }
    return std::pow(total, 1.0 / prm.p);
  };
  out.value = assemble(mu);
  out.dominating = assemble(full);
  return out;
}

}  // namespace tanglab
