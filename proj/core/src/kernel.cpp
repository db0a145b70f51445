#include "tanglab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tanglab/parallel.hpp"
#include "tanglab/spectral.hpp"

namespace tanglab {

std::vector<double> Cutoff::centers() const {
  const double a = inner - margin * sigma, b = outer + margin * sigma;
  const double step = sigma / 2.0;
  const auto n = static_cast<std::size_t>(std::llround((b - a) / step)) + 1;
  std::vector<double> c(n);
  for (std::size_t j = 0; j < n; ++j) c[j] = a + step * static_cast<double>(j);
  return c;
}

double Cutoff::center_weight() const { return 0.5 / std::sqrt(2.0 * M_PI); }

double Cutoff::operator()(double eta) const {
  const double e = std::abs(eta);
  if (e < support_lo() || e > support_hi()) return 0.0;
  const double w = center_weight();
  double acc = 0.0;
  for (double c : centers()) {
    const double u = (e - c) / sigma;
    if (std::abs(u) < 12.0) acc += w * std::exp(-0.5 * u * u);
    const double v = (e + c) / sigma;
    if (std::abs(v) < 12.0) acc += w * std::exp(-0.5 * v * v);
  }
  return acc;
}

double Cutoff::mass() const { return static_cast<double>(centers().size()) * sigma; }

double Cutoff::support_lo() const { return std::max(0.0, inner - (margin + 9.0) * sigma); }

double Cutoff::support_hi() const { return outer + (margin + 9.0) * sigma; }

KernelArgs kernel_args(const KernelSample& s, const CurveFamily& fam) {
  KernelArgs a;
  a.Gamma = eval_curve(fam, s.y, s.ty, s.thy) - eval_curve(fam, s.x, s.tx, s.thx);
  a.tau = s.ty - s.tx;
  a.lambda = s.lambda;
  return a;
}

cplx kernel_quadrature(const KernelArgs& a, const Cutoff& phi, double refine) {
  if (!(a.lambda > 0.0) || !(refine > 0.0)) throw ConfigError("kernel quadrature needs lambda > 0");
  const double lo = a.lambda * phi.support_lo(), hi = a.lambda * phi.support_hi();
  double h = 0.5 / (std::abs(a.Gamma) + std::abs(a.tau) * 2.0 * hi);
  h = std::min(h, a.lambda * phi.sigma / 4.0) / refine;
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h));
  const double step = (hi - lo) / static_cast<double>(n);
  // phi on the positive half; the negative half uses phi(-eta) = phi(eta).
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = step * phi((lo + (static_cast<double>(j) + 0.5) * step) / a.lambda);
  KahanSum acc;
  for (std::size_t j = 0; j < n; ++j) {
    if (w[j] == 0.0) continue;
    const double xi = lo + (static_cast<double>(j) + 0.5) * step;
    const double q = a.tau * xi * xi;
    // e^{i(G xi + q)} + e^{i(-G xi + q)} = 2 cos(G xi) e^{iq}
    const double c = 2.0 * w[j] * std::cos(a.Gamma * xi);
    acc.add(c * std::cos(q), c * std::sin(q));
  }
  return acc.value();
}

cplx kernel_analytic(const KernelArgs& a, const Cutoff& phi) {
  const double s2 = phi.sigma * phi.sigma;
  const cplx A(1.0 / (2.0 * s2), -a.lambda * a.lambda * a.tau);
  const double lw = std::log(phi.center_weight());
  const cplx half_log = 0.5 * std::log(cplx(M_PI, 0.0) / A);
  std::vector<cplx> logs;
  for (double c0 : phi.centers()) {
    for (double c : {c0, -c0}) {
      const cplx B(c / s2, a.lambda * a.Gamma);
      logs.push_back(lw + half_log + B * B / (4.0 * A) - c * c / (2.0 * s2));
    }
  }
  double M = -INFINITY;
  for (const auto& l : logs) M = std::max(M, l.real());
  KahanSum acc;
  for (const auto& l : logs) {
    const cplx e = std::exp(l - M);
    acc.add(e.real(), e.imag());
  }
  return a.lambda * std::exp(M) * acc.value();
}

cplx kernel_eval(const KernelSample& s, const CurveFamily& fam, const Cutoff& phi, double refine) {
  if (!fam.domain.contains(s.thx) || !fam.domain.contains(s.thy)) throw ConfigError("theta outside the family domain");
  if (!(s.tx >= 0.0 && s.tx <= 1.0 && s.ty >= 0.0 && s.ty <= 1.0)) throw ConfigError("times must lie in [0,1]");
  return kernel_quadrature(kernel_args(s, fam), phi, refine);
}

const char* regime_name(KernelRegime r) {
  switch (r) {
    case KernelRegime::far_time: return "E2";
    case KernelRegime::separated: return "E3";
    default: return "none";
  }
}

double e3_envelope(double lambda, double alpha, double d) {
  return std::max(std::sqrt(lambda / d), std::pow(d, -1.0 / (2.0 * alpha)));
}

Crossover envelope_crossover(double lambda, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
  Crossover c;
  c.analytic = std::pow(lambda, -alpha / (1.0 - alpha));
  // g(u) = log branch1 - log branch2 at d = e^u is increasing in u.
  auto g = [&](double u) { return 0.5 * std::log(lambda) - 0.5 * u + u / (2.0 * alpha); };
  double lo = -200.0, hi = 50.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  c.numeric = std::exp(0.5 * (lo + hi));
  return c;
}

ScalingFit stationary_sweep(double lambda, const std::vector<double>& taus, double eta0) {
  std::vector<double> vals;
  for (double t : taus) vals.push_back(std::abs(kernel_quadrature({-2.0 * lambda * t * eta0, t, lambda})));
  return fit_loglog(taus, vals);
}

namespace {

struct Draw {
  KernelSample s;
  cplx K;
};

}  // namespace

EnvelopeReport envelope_check(const EnvelopeConfig& cfg) {
  if (cfg.samples < 1) throw ConfigError("envelope check needs samples");
  if (!(cfg.lambda > 1.0)) throw ConfigError("lambda must exceed 1");
  const CurveFamily fam = CurveFamily::theta_power(cfg.alpha, cfg.theta);
  const Cutoff phi;
  EnvelopeReport rep;
  const auto dec = theta_decompose(cfg.theta, cfg.lambda, cfg.alpha);
  const ThetaSet piece = dec.pieces.front();
  rep.piece_diameter = dec.diameter;
  rep.far_threshold = 5.0 * (fam.C1 * cfg.r + fam.C2 + fam.C3 * cfg.theta.diameter()) / cfg.lambda;
  rep.sep_threshold = 2.0 * fam.C1 * fam.C3 * rep.piece_diameter;
  rep.e1_bound = cfg.lambda * phi.mass();
  rep.e2_bound = std::pow(cfg.lambda, -10.0);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double plo = piece.lo(), phi_hi = piece.hi();
  auto draw_theta = [&]() { return piece.kind() == ThetaKind::interval ? plo + (phi_hi - plo) * U(rng) : plo; };
  auto draw_x = [&]() { return cfg.x0 - cfg.r + 2.0 * cfg.r * U(rng); };

  auto classify = [&](const KernelSample& s) {
    const double dx = std::abs(s.x - s.y);
    if (dx == 0.0) return KernelRegime::neither;
    if (std::abs(s.ty - s.tx) >= rep.far_threshold) return KernelRegime::far_time;
    if (dx >= rep.sep_threshold) return KernelRegime::separated;
    return KernelRegime::neither;
  };

  // Draw samples per regime and push t(y), theta(y) towards larger |K|.
  auto generate = [&](KernelRegime want) {
    std::vector<KernelSample> out;
    std::size_t attempts = 0;
    while (out.size() < cfg.samples && attempts < 100 * cfg.samples) {
      ++attempts;
      KernelSample s;
      s.lambda = cfg.lambda;
      s.x = draw_x();
      s.y = draw_x();
      s.tx = U(rng);
      s.ty = want == KernelRegime::far_time ? U(rng)
                                            : std::clamp(s.tx + rep.far_threshold * (2.0 * U(rng) - 1.0), 0.0, 1.0);
      s.thx = draw_theta();
      s.thy = draw_theta();
      if (classify(s) != want) continue;
      double best = std::abs(kernel_analytic(kernel_args(s, fam), phi));
      double step = want == KernelRegime::far_time ? 0.1 : rep.far_threshold / 4.0;
      for (std::size_t it = 0; it < cfg.search_steps; ++it, step /= 2.0) {
        for (double sgn : {-1.0, 1.0}) {
          KernelSample c = s;
          c.ty = std::clamp(s.ty + sgn * step, 0.0, 1.0);
          c.thy = draw_theta();
          if (classify(c) != want) continue;
          const double v = std::abs(kernel_analytic(kernel_args(c, fam), phi));
          if (v > best) {
            best = v;
            s = c;
          }
        }
      }
      out.push_back(s);
    }
    return out;
  };

  const auto far = generate(KernelRegime::far_time);
  const auto sep = generate(KernelRegime::separated);
  rep.far_count = far.size();
  rep.sep_count = sep.size();
  rep.far_empty = far.empty();
  rep.sep_empty = sep.empty();

  std::vector<EnvelopeRow> far_rows(far.size()), sep_rows(sep.size());
  parallel_for(far.size(), [&](std::size_t i) {
    const auto& s = far[i];
    EnvelopeRow r;
    r.regime = KernelRegime::far_time;
    r.dx = std::abs(s.x - s.y);
    r.dt = std::abs(s.ty - s.tx);
    r.modulus = std::abs(kernel_analytic(kernel_args(s, fam), phi));
    r.modulus_refined = r.modulus;
    r.envelope = rep.e2_bound;
    r.ratio = r.modulus / r.envelope;
    far_rows[i] = r;
  });
  parallel_for(sep.size(), [&](std::size_t i) {
    const auto& s = sep[i];
    EnvelopeRow r;
    r.regime = KernelRegime::separated;
    r.dx = std::abs(s.x - s.y);
    r.dt = std::abs(s.ty - s.tx);
    r.modulus = std::abs(kernel_eval(s, fam, phi, 1.0));
    r.modulus_refined = std::abs(kernel_eval(s, fam, phi, 2.0));
    r.envelope = e3_envelope(cfg.lambda, cfg.alpha, r.dx);
    r.ratio = r.modulus / r.envelope;
    sep_rows[i] = r;
  });

  const double e1_slack = 1.0 + 1e-12;  // rounding of the two sums
  for (const auto& r : far_rows) {
    rep.e2_worst = std::max(rep.e2_worst, r.modulus);
    rep.e1_worst = std::max(rep.e1_worst, r.modulus / rep.e1_bound);
  }
  for (const auto& r : sep_rows) {
    rep.e3_C = std::max(rep.e3_C, r.ratio);
    rep.e3_C_refined = std::max(rep.e3_C_refined, r.modulus_refined / r.envelope);
    rep.e1_worst = std::max(rep.e1_worst, std::max(r.modulus, r.modulus_refined) / rep.e1_bound);
  }
  rep.e1_pass = rep.e1_worst <= e1_slack;
  rep.e2_pass = rep.far_empty || rep.e2_worst <= rep.e2_bound;
  rep.e3_drift = rep.e3_C > 0.0 ? std::abs(rep.e3_C_refined - rep.e3_C) / rep.e3_C : 0.0;
  rep.e3_pass = rep.sep_empty || (rep.e3_C <= cfg.C_bound && rep.e3_drift < cfg.drift_bound);
  rep.rows = std::move(far_rows);
  rep.rows.insert(rep.rows.end(), sep_rows.begin(), sep_rows.end());
  rep.pass = rep.e1_pass && rep.e2_pass && rep.e3_pass;
  return rep;
}

}  // namespace tanglab
