#include "tanglab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "tanglab/parallel.hpp"

namespace tanglab {

double SymbolSpec::operator()(const Vec& xi) const {
  switch (kind) {
    case SymbolKind::paraboloid:
      return xi[0] * xi[0] + xi[1] * xi[1];
    case SymbolKind::modulus_power:
      return std::pow(norm(xi), m);
    case SymbolKind::first_coordinate_power:
      if (m == std::round(m)) return std::pow(xi[0], m);
      return std::pow(std::abs(xi[0]), m);
  }
  return 0.0;
}

double SymbolSpec::grad_sup(double band) const {
  if (kind == SymbolKind::paraboloid) return 2.0 * band;
  return m * std::pow(band, m - 1.0);
}

void SymbolSpec::validate() const {
  if (!(m >= 1.0) || !std::isfinite(m)) throw ConfigError("symbol order m must be >= 1");
  if (kind == SymbolKind::paraboloid && m != 2.0) throw ConfigError("paraboloid symbol requires m = 2");
}

BandlimitedField::BandlimitedField(int dim, std::vector<FrequencyAtom> atoms, Provenance prov)
    : dim_(dim), atoms_(std::move(atoms)), prov_(std::move(prov)) {
  if (dim_ != 1 && dim_ != 2) throw ConfigError("field dimension must be 1 or 2");
  if (atoms_.empty()) throw ConfigError("field needs at least one atom");
  for (const auto& a : atoms_) {
    if (!(a.w > 0) || !std::isfinite(a.w)) throw InputError("atom weight must be positive and finite");
    if (!std::isfinite(a.xi[0]) || !std::isfinite(a.xi[1]) || !std::isfinite(a.c.real()) ||
        !std::isfinite(a.c.imag()))
      throw InputError("atom node and coefficient must be finite");
    if (dim_ == 1 && a.xi[1] != 0.0) throw InputError("1D atom with nonzero second coordinate");
    band_ = std::max(band_, norm(a.xi));
  }
  std::vector<Vec> nodes;
  nodes.reserve(atoms_.size());
  for (const auto& a : atoms_) nodes.push_back(a.xi);
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end())
    throw InputError("atom nodes must be pairwise distinct");
}

double BandlimitedField::l1_mass() const {
  double s = 0;
  for (const auto& a : atoms_) s += a.w * std::abs(a.c);
  return s;
}

double resolution_margin(const BandlimitedField& f, const SymbolSpec& P, double x_max, double t_max) {
  const double h = f.provenance().spacing;
  if (h <= 0) return 0.0;
  return h * (x_max + t_max * P.grad_sup(f.band()));
}

void check_resolution(const BandlimitedField& f, const SymbolSpec& P, double x_max, double t_max) {
  const double v = resolution_margin(f, P, x_max, t_max);
  if (v > 0.5) {
    std::ostringstream os;
    os << "quadrature too coarse: h*(X_max + T_max*sup|grad P|) = " << v << " > 0.5 (h="
       << f.provenance().spacing << ", X_max=" << x_max << ", T_max=" << t_max << ")";
    throw ConfigError(os.str());
  }
}

std::vector<cplx> evaluate_field(const BandlimitedField& f, const std::vector<Vec>& points) {
  for (const auto& p : points)
    if (!std::isfinite(p[0]) || !std::isfinite(p[1])) throw InputError("non-finite evaluation point");
  std::vector<cplx> out(points.size());
  const auto& atoms = f.atoms();
  parallel_for(points.size(), [&](std::size_t i) {
    KahanSum acc;
    const Vec x = points[i];
    for (const auto& a : atoms) {
      const double ph = x[0] * a.xi[0] + x[1] * a.xi[1];
      const cplx wc = a.w * a.c;
      const double cs = std::cos(ph), sn = std::sin(ph);
      acc.add(wc.real() * cs - wc.imag() * sn, wc.real() * sn + wc.imag() * cs);
    }
    out[i] = acc.value();
  });
  return out;
}

double sobolev_norm(const BandlimitedField& f, SobolevSpec s) {
  if (!std::isfinite(s.s)) throw InputError("Sobolev index must be finite");
  double sum = 0, comp = 0;
  for (const auto& a : f.atoms()) {
    const double r2 = a.xi[0] * a.xi[0] + a.xi[1] * a.xi[1];
    const double term = a.w * std::pow(1.0 + r2, s.s) * std::norm(a.c);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return std::sqrt(sum);
}

int dyadic_index(double r) {
  if (r < 2.0) return 0;
  int k = static_cast<int>(std::floor(std::log2(r)));
  // guard the floor against rounding at exact powers of two
  while (std::ldexp(1.0, k) > r) --k;
  while (std::ldexp(1.0, k + 1) <= r) ++k;
  return k;
}

std::vector<BandlimitedField> littlewood_paley_split(const BandlimitedField& f) {
  std::map<int, std::vector<FrequencyAtom>> bins;
  for (const auto& a : f.atoms()) bins[dyadic_index(norm(a.xi))].push_back(a);
  std::vector<BandlimitedField> out;
  for (auto& [k, atoms] : bins) {
    Provenance p = f.provenance();
    p.params["lp_piece"] = k;
    out.emplace_back(f.dim(), std::move(atoms), p);
  }
  return out;
}

namespace {

std::vector<double> midpoints(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  const double h = (b - a) / n;
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (i + 0.5) * h;
  return v;
}

std::size_t axis_nodes(const FieldRecipe& r, double length) {
  if (r.nodes) return r.nodes;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length * r.resolution - 1e-9)));
}

// Lattice midpoints of [-L, L]^dim at spacing h kept by the predicate.
template <class Keep>
std::vector<Vec> lattice(int dim, double L, double h, Keep keep) {
  const std::size_t n = static_cast<std::size_t>(std::ceil(2 * L / h - 1e-9));
  const auto ax = midpoints(-L, -L + n * h, n);
  std::vector<Vec> out;
  if (dim == 1) {
    for (double x : ax)
      if (keep(Vec{x, 0.0})) out.push_back({x, 0.0});
  } else {
    for (double x : ax)
      for (double y : ax)
        if (keep(Vec{x, y})) out.push_back({x, y});
  }
  return out;
}

}  // namespace

BandlimitedField make_field(const FieldRecipe& r) {
  if (r.dim != 1 && r.dim != 2) throw ConfigError("recipe dimension must be 1 or 2");
  if (!r.nodes && !(r.resolution >= 2.0))
    throw ConfigError("quadrature resolution must be >= 2 nodes per unit frequency per axis");
  std::vector<FrequencyAtom> atoms;
  Provenance prov;
  prov.seed = r.seed;
  double h = 0;
  switch (r.kind) {
    case RecipeKind::cube: {
      if (!(r.R >= 1.0)) throw ConfigError("cube recipe requires R >= 1");
      const std::size_t n = axis_nodes(r, 1.0);
      h = 1.0 / n;
      const auto ax = midpoints(r.R, r.R + 1.0, n);
      const double w = std::pow(h, r.dim);
      if (r.dim == 1) {
        for (double x : ax) atoms.push_back({{x, 0.0}, w, 1.0});
      } else {
        for (double x : ax)
          for (double y : ax) atoms.push_back({{x, y}, w, 1.0});
      }
      prov.recipe = "indicator-of-cube";
      break;
    }
    case RecipeKind::ball: {
      if (!(r.R > 0)) throw ConfigError("ball recipe requires radius > 0");
      if (r.dim == 1) {
        const std::size_t n = axis_nodes(r, 2 * r.R);
        h = 2 * r.R / n;
        for (double x : midpoints(-r.R, r.R, n)) atoms.push_back({{x, 0.0}, h, 1.0});
      } else {
        h = r.nodes ? 2 * r.R / r.nodes : 1.0 / r.resolution;
        for (const auto& v : lattice(2, r.R, h, [&](const Vec& v) { return norm(v) <= r.R; }))
          atoms.push_back({v, h * h, 1.0});
      }
      prov.recipe = "indicator-of-ball";
      break;
    }
    case RecipeKind::gaussian: {
      if (!(r.sigma > 0)) throw ConfigError("gaussian recipe requires sigma > 0");
      // trapezoid rule on [-extent, extent]^dim
      const std::size_t n = r.nodes ? r.nodes : axis_nodes(r, 2 * r.extent) + 1;
      if (n < 2) throw ConfigError("gaussian recipe needs >= 2 nodes per axis");
      h = 2 * r.extent / (n - 1);
      std::vector<double> ax(n), tw(n, h);
      for (std::size_t i = 0; i < n; ++i) ax[i] = -r.extent + i * h;
      tw.front() = tw.back() = h / 2;
      const double s2 = r.sigma * r.sigma;
      if (r.dim == 1) {
        for (std::size_t i = 0; i < n; ++i)
          atoms.push_back({{ax[i], 0.0}, tw[i], std::exp(-ax[i] * ax[i] / s2)});
      } else {
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            atoms.push_back({{ax[i], ax[j]}, tw[i] * tw[j], std::exp(-(ax[i] * ax[i] + ax[j] * ax[j]) / s2)});
      }
      prov.recipe = "gaussian";
      prov.params["sigma"] = r.sigma;
      prov.params["extent"] = r.extent;
      break;
    }
    case RecipeKind::random_annulus:
    case RecipeKind::sobolev_random: {
      if (!(r.R >= 1.0)) throw ConfigError("random recipes require band >= 1");
      h = r.nodes ? 2 * r.R / r.nodes : 1.0 / r.resolution;
      const bool annulus = r.kind == RecipeKind::random_annulus;
      const auto nodes = lattice(r.dim, r.R, h, [&](const Vec& v) {
        const double q = norm(v);
        return annulus ? (q >= r.R / 2 && q <= r.R) : q <= r.R;
      });
      std::mt19937_64 rng(r.seed);
      std::uniform_real_distribution<double> phase(0.0, 2 * M_PI);
      const double w = std::pow(h, r.dim);
      for (const auto& v : nodes) {
        const double amp = annulus ? 1.0 : std::pow(1.0 + dot(v, v), -r.decay / 2 - 0.25);
        atoms.push_back({v, w, std::polar(amp, phase(rng))});
      }
      prov.recipe = annulus ? "random-phase-annulus" : "random-sobolev";
      if (!annulus) prov.params["decay"] = r.decay;
      break;
    }
  }
  prov.spacing = h;
  prov.resolution = 1.0 / h;
  prov.params["R"] = r.R;
  prov.params["dim"] = r.dim;
  BandlimitedField f(r.dim, std::move(atoms), prov);
  if (r.symbol) {
    r.symbol->validate();
    check_resolution(f, *r.symbol, r.x_max, r.t_max);
  }
  return f;
}

}  // namespace tanglab
