#include "tanglab/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace tanglab {

CurveSpec CurveSpec::vertical() { return CurveSpec{}; }

CurveSpec CurveSpec::power_shift(Vec mu, double alpha, std::optional<double> C_alpha) {
  CurveSpec c;
  c.form = CurveForm::power_shift;
  c.mu = mu;
  c.alpha = alpha;
  c.C_alpha = C_alpha.value_or(std::max(1.0, norm(mu)));
  c.validate();
  return c;
}

CurveSpec CurveSpec::general(std::function<Vec(const Vec&, double)> fn, double alpha, double C_alpha) {
  CurveSpec c;
  c.form = CurveForm::general;
  c.table = std::move(fn);
  c.alpha = alpha;
  c.C_alpha = C_alpha;
  c.validate();
  return c;
}

void CurveSpec::validate() const {
  if (!(alpha > 0 && alpha <= 1)) throw ConfigError("curve alpha must lie in (0, 1]");
  if (!(C_alpha > 0) || !std::isfinite(C_alpha)) throw ConfigError("curve constant must be positive");
  if (form == CurveForm::general && !table) throw ConfigError("general curve needs an evaluator");
}

CurveFamily CurveFamily::theta_power(double alpha, ThetaSet domain) {
  if (!(alpha > 0 && alpha < 1)) throw ConfigError("family alpha must lie in (0, 1)");
  CurveFamily f;
  f.alpha = alpha;
  f.domain = domain;
  f.eval = [alpha](double x, double t, double th) { return x + th * std::pow(t, alpha); };
  f.C1 = 1.0;
  f.C2 = std::max(std::abs(domain.lo()), std::abs(domain.hi()));
  f.C3 = 1.0;
  f.name = "theta-power";
  return f;
}

Vec eval_curve(const CurveSpec& spec, const Vec& x, double t, std::optional<double> theta) {
  if (theta) throw UsageError("curve parameter given for a single curve");
  if (!(t >= 0) || !std::isfinite(t)) throw PreconditionError("curve time must be finite and >= 0");
  switch (spec.form) {
    case CurveForm::vertical:
      return x;
    case CurveForm::power_shift: {
      if (t == 0) return x;
      const double p = std::pow(t, spec.alpha);
      return {x[0] + spec.mu[0] * p, x[1] + spec.mu[1] * p};
    }
    case CurveForm::general:
      return spec.table(x, t);
  }
  return x;
}

double eval_curve(const CurveFamily& fam, double x, double t, double theta) {
  if (!(t >= 0) || !std::isfinite(t)) throw PreconditionError("curve time must be finite and >= 0");
  return fam.eval(x, t, theta);
}

const ConditionResult* ConditionReport::find(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

constexpr double kSlack = 1e-9;

// Pairs concentrated near t = 0 where Hoelder quotients peak: t = 2^-j u, and
// the partner is either 0 or a dyadic fraction of t.
struct DyadicPairs {
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> U{0.0, 1.0};
  explicit DyadicPairs(std::uint64_t seed) : rng(seed) {}
  std::pair<double, double> next(std::size_t i) {
    const int j = static_cast<int>(rng() % 41);
    const double t = std::ldexp(0.5 + 0.5 * U(rng), -j);
    double s;
    switch (i % 3) {
      case 0:
        s = 0.0;
        break;
      case 1:
        s = t * std::ldexp(1.0, -static_cast<int>(1 + rng() % 20));
        break;
      default:
        s = t * U(rng);
    }
    return {t, s};
  }
};

void finish(ConditionReport& r) {
  r.pass = true;
  for (auto& c : r.conditions) r.pass = r.pass && c.pass;
}

}  // namespace

ConditionReport verify_conditions(const CurveSpec& spec, std::size_t samples, std::uint64_t seed) {
  if (samples < 100) throw PreconditionError("verify_conditions needs sample size >= 100");
  spec.validate();
  DyadicPairs pairs(seed);
  std::uniform_real_distribution<double> X(-1.0, 1.0);
  double anchor = 0, holder = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Vec x{X(pairs.rng), X(pairs.rng)};
    const Vec g0 = eval_curve(spec, x, 0.0);
    anchor = std::max(anchor, norm({g0[0] - x[0], g0[1] - x[1]}));
    const auto [t, s] = pairs.next(i);
    if (t == s) continue;
    const Vec a = eval_curve(spec, x, t), b = eval_curve(spec, x, s);
    // Positions carry rounding at the scale of |x|, which dominates the
    // difference once t - s is tiny; discount it.
    const double round = 4.0 * std::numeric_limits<double>::epsilon() * (norm(a) + norm(b));
    holder = std::max(holder, std::max(0.0, norm({a[0] - b[0], a[1] - b[1]}) - round) / std::pow(t - s, spec.alpha));
  }
  ConditionReport r;
  r.conditions.push_back({"anchoring", anchor, 0.0, anchor == 0.0});
  r.conditions.push_back({"holder", holder, spec.C_alpha, holder <= spec.C_alpha * (1 + kSlack)});
  finish(r);
  return r;
}

ConditionReport verify_conditions(const CurveFamily& fam, std::size_t samples, std::uint64_t seed) {
  if (samples < 100) throw PreconditionError("verify_conditions needs sample size >= 100");
  DyadicPairs pairs(seed);
  std::uniform_real_distribution<double> X(-1.0, 1.0);
  const auto thetas = fam.domain.sample(2 * samples, seed ^ 0x9e3779b97f4a7c15ULL);
  double anchor = 0, c1 = 0, c2 = 0, c3 = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double th = thetas[2 * i], th2 = thetas[2 * i + 1];
    const double x = X(pairs.rng);
    anchor = std::max(anchor, std::abs(eval_curve(fam, x, 0.0, th) - x));

    const auto [t, s] = pairs.next(i);
    double xp = X(pairs.rng);
    if (xp == x) xp = x + 0.5;
    const double q = std::abs(eval_curve(fam, x, t, th) - eval_curve(fam, xp, t, th)) / std::abs(x - xp);
    c1 = std::max({c1, q, q > 0 ? 1.0 / q : INFINITY});

    if (t != s) {
      const double a = eval_curve(fam, x, t, th), b = eval_curve(fam, x, s, th);
      const double round = 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(a) + std::abs(b));
      c2 = std::max(c2, std::max(0.0, std::abs(a - b) - round) / std::pow(t - s, fam.alpha));
    }

    if (th != th2) {
      // t spread over [0, 1] so that the t-dependent Lipschitz constant is probed at its peak
      const double tt = (i % 2 == 0) ? 1.0 - std::ldexp(pairs.U(pairs.rng), -4) : pairs.U(pairs.rng);
      c3 = std::max(c3, std::abs(eval_curve(fam, x, tt, th) - eval_curve(fam, x, tt, th2)) / std::abs(th - th2));
    }
  }
  ConditionReport r;
  r.conditions.push_back({"anchoring", anchor, 0.0, anchor == 0.0});
  r.conditions.push_back({"C1", c1, fam.C1, c1 <= fam.C1 * (1 + kSlack)});
  r.conditions.push_back({"C2", c2, fam.C2, c2 <= fam.C2 * (1 + kSlack)});
  r.conditions.push_back({"C3", c3, fam.C3, c3 <= fam.C3 * (1 + kSlack)});
  finish(r);
  return r;
}

}  // namespace tanglab
