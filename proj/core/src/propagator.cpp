#include "tanglab/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "tanglab/parallel.hpp"

namespace tanglab {

namespace {

void check_points(const BandlimitedField& f, const SymbolSpec& P, const std::vector<SpaceTimePoint>& pts) {
  P.validate();
  const double h = f.provenance().spacing;
  const double g = P.grad_sup(f.band());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& q = pts[i];
    if (!std::isfinite(q.x[0]) || !std::isfinite(q.x[1]) || !std::isfinite(q.t) || q.t < 0) {
      std::ostringstream os;
      os << "invalid space-time point #" << i << " (" << q.x[0] << ", " << q.x[1] << ", t=" << q.t << ")";
      throw InputError(os.str());
    }
    if (h > 0 && h * (norm(q.x) + q.t * g) > 0.5) {
      std::ostringstream os;
      os << "quadrature too coarse at point #" << i << " (x=(" << q.x[0] << ", " << q.x[1] << "), t=" << q.t
         << "): h*(|x| + t*sup|grad P|) = " << h * (norm(q.x) + q.t * g) << " > 0.5";
      throw ConfigError(os.str());
    }
  }
}

}  // namespace

PreparedEvolution::PreparedEvolution(const BandlimitedField& f, const SymbolSpec& P) {
  const auto& a = f.atoms();
  x0_.reserve(a.size());
  for (const auto& at : a) {
    x0_.push_back(at.xi[0]);
    x1_.push_back(at.xi[1]);
    p_.push_back(P(at.xi));
    const cplx wc = at.w * at.c;
    wre_.push_back(wc.real());
    wim_.push_back(wc.imag());
  }
}

cplx PreparedEvolution::operator()(const Vec& x, double t) const {
  KahanSum acc;
  const std::size_t n = x0_.size();
  for (std::size_t k = 0; k < n; ++k) {
    double ph = x[0] * x0_[k] + x[1] * x1_[k];
    if (t != 0.0) ph += t * p_[k];
    const double cs = std::cos(ph), sn = std::sin(ph);
    acc.add(wre_[k] * cs - wim_[k] * sn, wre_[k] * sn + wim_[k] * cs);
  }
  return acc.value();
}

std::vector<cplx> evolve(const BandlimitedField& f, const SymbolSpec& P, const std::vector<SpaceTimePoint>& pts) {
  check_points(f, P, pts);
  const PreparedEvolution prep(f, P);
  std::vector<cplx> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { out[i] = prep(pts[i].x, pts[i].t); });
  return out;
}

cplx evolve_one(const BandlimitedField& f, const SymbolSpec& P, const SpaceTimePoint& pt) {
  return evolve(f, P, {pt}).front();
}

namespace {

template <class Gamma>
CMatrix along(const BandlimitedField& f, const SymbolSpec& P, const std::vector<Vec>& xs,
              const std::vector<double>& ts, Gamma gamma) {
  std::vector<SpaceTimePoint> pts;
  pts.reserve(xs.size() * ts.size());
  for (const auto& x : xs)
    for (double t : ts) pts.push_back({gamma(x, t), t});
  const auto vals = evolve(f, P, pts);
  CMatrix m(xs.size(), ts.size());
  m.data = vals;
  return m;
}

}  // namespace

CMatrix evolve_along_curve(const BandlimitedField& f, const SymbolSpec& P, const CurveSpec& curve,
                           const std::vector<Vec>& xs, const std::vector<double>& ts, std::optional<double> theta) {
  if (theta) throw UsageError("curve parameter given for a single curve");
  return along(f, P, xs, ts, [&](const Vec& x, double t) { return eval_curve(curve, x, t); });
}

CMatrix evolve_along_curve(const BandlimitedField& f, const SymbolSpec& P, const CurveFamily& fam,
                           const std::vector<Vec>& xs, const std::vector<double>& ts, double theta) {
  if (f.dim() != 1) throw UsageError("curve families act on one-dimensional fields");
  return along(f, P, xs, ts, [&](const Vec& x, double t) { return Vec{eval_curve(fam, x[0], t, theta), 0.0}; });
}

double lattice_tail(int n, double q, int L) {
  if (n == 1) return 2.0 * std::pow(1.0 + L, 1.0 - q) / (q - 1.0);
  return 8.0 * std::pow(1.0 + L, 2.0 - q) / (q - 2.0);
}

namespace {

std::vector<Vec> lattice_offsets(int n, int L) {
  std::vector<Vec> out;
  if (n == 1) {
    for (int i = -L; i <= L; ++i) out.push_back({double(i), 0.0});
  } else {
    for (int i = -L; i <= L; ++i)
      for (int j = -L; j <= L; ++j) out.push_back({double(i), double(j)});
  }
  return out;
}

int inf_norm(const Vec& l) { return static_cast<int>(std::max(std::abs(l[0]), std::abs(l[1]))); }

void finalize(MajorantReport& r) {
  r.fitted_C = 0;
  r.tail_consistent = true;
  r.worst_tail_use = 0;
  for (const auto& s : r.samples) {
    r.fitted_C = std::max(r.fitted_C, s.rhs > 0 ? s.lhs / s.rhs : (s.lhs > 0 ? INFINITY : 0.0));
    const double gap = std::abs(s.rhs_doubled - s.rhs);
    const double use = s.tail > 0 ? gap / s.tail : (gap > 0 ? INFINITY : 0.0);
    r.worst_tail_use = std::max(r.worst_tail_use, use);
    r.tail_consistent = r.tail_consistent && gap <= s.tail * (1 + 1e-9) + 1e-300;
  }
  r.pass = std::isfinite(r.fitted_C) && r.fitted_C <= r.C_bound && r.tail_consistent;
}

Vec center_of(const BandlimitedField& f) {
  Vec lo{INFINITY, INFINITY}, hi{-INFINITY, -INFINITY};
  for (const auto& a : f.atoms())
    for (int d = 0; d < 2; ++d) {
      lo[d] = std::min(lo[d], a.xi[d]);
      hi[d] = std::max(hi[d], a.xi[d]);
    }
  return {(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2};
}

double radius_about(const BandlimitedField& f, const Vec& c) {
  double r = 0;
  for (const auto& a : f.atoms()) r = std::max(r, norm({a.xi[0] - c[0], a.xi[1] - c[1]}));
  return r;
}

}  // namespace

MajorantReport shift_expansion_check(const BandlimitedField& f, const SymbolSpec& P, const CurveSpec& curve,
                                     const std::vector<Vec>& xs, const std::vector<double>& ts, int L,
                                     double C_bound) {
  if (L < 1) throw PreconditionError("truncation L must be >= 1");
  if (xs.size() != ts.size()) throw PreconditionError("x and t samples must be paired");
  const double lam = f.band();
  for (const auto& a : f.atoms())
    if (norm(a.xi) < lam / 4) throw PreconditionError("field is not annulus supported (|xi| ~ lambda)");
  const double tmax = std::pow(lam, -1.0 / curve.alpha);
  const int n = f.dim();
  const auto offs = lattice_offsets(n, 2 * L);
  const double maxterm = f.l1_mass();
  const double tail = maxterm * lattice_tail(n, n + 1.0, L);

  MajorantReport rep;
  rep.truncation = L;
  rep.C_bound = C_bound;
  std::vector<SpaceTimePoint> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double t = ts[i];
    if (!(t > 0 && t < tmax)) {
      std::ostringstream os;
      os << "t = " << t << " outside the window (0, lambda^{-1/alpha}) = (0, " << tmax << ")";
      throw PreconditionError(os.str());
    }
    const Vec g = eval_curve(curve, xs[i], t);
    if (norm({g[0] - xs[i][0], g[1] - xs[i][1]}) > curve.C_alpha * std::pow(t, curve.alpha) * (1 + 1e-9))
      throw PreconditionError("curve displacement exceeds C_alpha t^alpha");
    pts.push_back({g, t});
    for (const auto& l : offs) pts.push_back({{xs[i][0] + l[0] / lam, xs[i][1] + l[1] / lam}, t});
  }
  const auto vals = evolve(f, P, pts);
  const std::size_t stride = offs.size() + 1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    MajorantSample s;
    s.lhs = std::abs(vals[i * stride]);
    for (std::size_t k = 0; k < offs.size(); ++k) {
      const double w = std::pow(1.0 + norm(offs[k]), -(n + 1.0)) * std::abs(vals[i * stride + 1 + k]);
      s.rhs_doubled += w;
      if (inf_norm(offs[k]) <= L) s.rhs += w;
    }
    s.tail = tail;
    rep.samples.push_back(s);
  }
  finalize(rep);
  return rep;
}

namespace {

void check_local(const BandlimitedField& f, const CurveSpec& curve, const LocalizedShiftSetup& s, double radius) {
  if (f.dim() != 2) throw PreconditionError("localized shift expansion acts on planar fields");
  if (!(curve.alpha >= 0.5 && curve.alpha < 1.0))
    throw PreconditionError("localized shift expansion requires alpha in [1/2, 1)");
  if (!(s.rho >= 1 && s.rho <= s.R)) throw PreconditionError("need 1 <= rho <= R");
  if (s.truncation < 1) throw PreconditionError("truncation must be >= 1");
  const Vec c = center_of(f);
  if (radius_about(f, c) > radius * (1 + 1e-9))
    throw PreconditionError("field frequency support exceeds the required ball");
}

Vec curve_point(const CurveSpec& curve, double R, double t) {
  const Vec g = eval_curve(curve, {0.0, 0.0}, t / (R * R));
  return {R * g[0], R * g[1]};
}

std::vector<std::pair<Vec, double>> sample_cylinder(const LocalizedShiftSetup& s) {
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<std::pair<Vec, double>> out;
  for (int i = 0; i < s.samples; ++i) {
    const double r = s.rho * std::sqrt(U(rng)), a = 2 * M_PI * U(rng);
    out.push_back({{s.x0[0] + r * std::cos(a), s.x0[1] + r * std::sin(a)}, s.t0 + s.rho * U(rng)});
  }
  return out;
}

}  // namespace

MajorantReport shift_expansion_local(const BandlimitedField& f, const CurveSpec& curve,
                                     const LocalizedShiftSetup& s) {
  check_local(f, curve, s, std::pow(s.rho, -curve.alpha));
  const SymbolSpec P = SymbolSpec::paraboloid();
  const int L = s.truncation;
  const auto offs = lattice_offsets(2, 2 * L);
  const double step = std::pow(s.rho, curve.alpha);
  const Vec anchor = curve_point(curve, s.R, s.t0);
  const auto cyl = sample_cylinder(s);

  std::vector<SpaceTimePoint> pts;
  for (const auto& [x, t] : cyl) {
    const Vec g = curve_point(curve, s.R, t);
    pts.push_back({{x[0] + g[0], x[1] + g[1]}, t});
    for (const auto& l : offs)
      pts.push_back({{x[0] + anchor[0] + step * l[0], x[1] + anchor[1] + step * l[1]}, t});
  }
  const auto vals = evolve(f, P, pts);
  const double tail = f.l1_mass() * lattice_tail(2, 100.0, L);
  MajorantReport rep;
  rep.truncation = L;
  rep.C_bound = s.C_bound;
  const std::size_t stride = offs.size() + 1;
  for (std::size_t i = 0; i < cyl.size(); ++i) {
    MajorantSample m;
    m.lhs = std::abs(vals[i * stride]);
    for (std::size_t k = 0; k < offs.size(); ++k) {
      const double w = std::pow(1.0 + norm(offs[k]), -100.0) * std::abs(vals[i * stride + 1 + k]);
      m.rhs_doubled += w;
      if (inf_norm(offs[k]) <= L) m.rhs += w;
    }
    m.tail = tail;
    rep.samples.push_back(m);
  }
  finalize(rep);
  return rep;
}

MajorantReport shift_expansion2(const BandlimitedField& f, const CurveSpec& curve, const LocalizedShiftSetup& s,
                                int q) {
  check_local(f, curve, s, 1.0 / s.rho);
  if (q < 2) throw PreconditionError("quadrature needs >= 2 nodes per axis");
  const SymbolSpec P = SymbolSpec::paraboloid();
  const int L = s.truncation;

  // polar midpoint rule on B(x0, rho) times midpoint rule on (t0, t0 + rho)
  struct Node {
    Vec y;
    double t, w;
  };
  std::vector<Node> nodes;
  const int nr = q, na = 2 * q, nt = q;
  for (int ir = 0; ir < nr; ++ir)
    for (int ia = 0; ia < na; ++ia)
      for (int it = 0; it < nt; ++it) {
        const double r = s.rho * (ir + 0.5) / nr, a = 2 * M_PI * (ia + 0.5) / na;
        const double t = s.t0 + s.rho * (it + 0.5) / nt;
        const double w = r * (s.rho / nr) * (2 * M_PI / na) * (s.rho / nt);
        nodes.push_back({{s.x0[0] + r * std::cos(a), s.x0[1] + r * std::sin(a)}, t, w});
      }

  // I(k): space-time L1 mass of the evolution shifted by rho k, |k|_inf <= 4L
  const auto ks = lattice_offsets(2, 4 * L);
  std::vector<SpaceTimePoint> pts;
  pts.reserve(ks.size() * nodes.size());
  for (const auto& k : ks)
    for (const auto& nd : nodes) {
      const Vec g = curve_point(curve, s.R, nd.t);
      pts.push_back({{nd.y[0] + s.rho * k[0] + g[0], nd.y[1] + s.rho * k[1] + g[1]}, nd.t});
    }
  const auto vals = evolve(f, P, pts);
  std::vector<double> I(ks.size(), 0.0);
  for (std::size_t a = 0; a < ks.size(); ++a)
    for (std::size_t b = 0; b < nodes.size(); ++b) I[a] += nodes[b].w * std::abs(vals[a * nodes.size() + b]);

  // W_L(k) = sum over l + m = k with |l|, |m| <= L (inf norm) of the product weights
  auto weight = [&](const Vec& k, int trunc) {
    double w = 0;
    for (int i = -trunc; i <= trunc; ++i)
      for (int j = -trunc; j <= trunc; ++j) {
        const Vec l{double(i), double(j)}, m{k[0] - i, k[1] - j};
        if (inf_norm(m) > trunc) continue;
        w += std::pow(1.0 + norm(l), -100.0) * std::pow(1.0 + norm(m), -100.0);
      }
    return w;
  };
  const double rho3 = std::pow(s.rho, -3.0);
  double rhsL = 0, rhs2L = 0;
  for (std::size_t a = 0; a < ks.size(); ++a) {
    if (inf_norm(ks[a]) <= 2 * L) rhsL += weight(ks[a], L) * I[a];
    rhs2L += weight(ks[a], 2 * L) * I[a];
  }
  rhsL *= rho3;
  rhs2L *= rho3;

  double SL = 0;
  for (const auto& l : lattice_offsets(2, L)) SL += std::pow(1.0 + norm(l), -100.0);
  const double t1 = lattice_tail(2, 100.0, L);
  const double tail = f.l1_mass() * M_PI * t1 * (2 * SL + t1);

  const auto cyl = sample_cylinder(s);
  std::vector<SpaceTimePoint> lhs_pts;
  for (const auto& [x, t] : cyl) {
    const Vec g = curve_point(curve, s.R, t);
    lhs_pts.push_back({{x[0] + g[0], x[1] + g[1]}, t});
  }
  const auto lhs = evolve(f, P, lhs_pts);
  MajorantReport rep;
  rep.truncation = L;
  rep.C_bound = s.C_bound;
  for (const auto& v : lhs) rep.samples.push_back({std::abs(v), rhsL, rhs2L, tail});
  finalize(rep);
  return rep;
}

}  // namespace tanglab
