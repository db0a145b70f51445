#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tanglab/curves.hpp"
#include "tanglab/fit.hpp"

namespace tanglab {

// Cutoff phi: a normalized Gaussian mixture, equal to 1 (to rounding) on
// 1/2 <= |eta| <= 2 with Gaussian tails of width sigma outside.
struct Cutoff {
  double sigma = 1.0 / 80.0;
  double inner = 0.5;
  double outer = 2.0;
  double margin = 8.0;  // centres extend margin*sigma beyond [inner, outer]

  std::vector<double> centers() const;  // positive half; mirrored for eta < 0
  double center_weight() const;         // spacing / (sqrt(2 pi) sigma)
  double operator()(double eta) const;
  double mass() const;                  // integral of phi
  // phi is below 1e-16 outside |eta| <= support_hi() and inside |eta| >= support_lo().
  double support_lo() const;
  double support_hi() const;
};

struct KernelSample {
  double x = 0.0, y = 0.0;
  double tx = 0.0, ty = 0.0;
  double thx = 0.0, thy = 0.0;
  double lambda = 256.0;
};

// Differences Gamma = gamma(y) - gamma(x), tau = t(y) - t(x).
struct KernelArgs {
  double Gamma = 0.0;
  double tau = 0.0;
  double lambda = 256.0;
};

KernelArgs kernel_args(const KernelSample& s, const CurveFamily& fam);

// Midpoint quadrature of int e^{i(Gamma xi + tau xi^2)} phi(xi/lambda) dxi with
// spacing h (Gamma + |tau| sup|2 xi|) <= 0.5 / refine.
cplx kernel_quadrature(const KernelArgs& a, const Cutoff& phi = {}, double refine = 1.0);
// Closed form per Gaussian component, summed in log scale; usable far below
// the quadrature noise floor.
cplx kernel_analytic(const KernelArgs& a, const Cutoff& phi = {});

cplx kernel_eval(const KernelSample& s, const CurveFamily& fam, const Cutoff& phi = {}, double refine = 1.0);

enum class KernelRegime { far_time, separated, neither };
const char* regime_name(KernelRegime r);

struct EnvelopeConfig {
  double lambda = 256.0;
  double alpha = 0.5;
  double x0 = 0.0;
  double r = 0.5;
  ThetaSet theta = ThetaSet::interval(0.5, 1.0);  // Theta
  std::size_t samples = 500;                      // per regime
  std::size_t search_steps = 12;                  // local search for t(y), theta(y)
  std::uint64_t seed = 1;
  double C_bound = 100.0;
  double drift_bound = 0.03;
};

struct EnvelopeRow {
  KernelRegime regime = KernelRegime::neither;
  double dx = 0.0, dt = 0.0;
  double modulus = 0.0;
  double modulus_refined = 0.0;  // separated regime: quadrature at doubled resolution
  double envelope = 0.0;
  double ratio = 0.0;
};

struct EnvelopeReport {
  double far_threshold = 0.0;   // 5 (C1 r + C2 + C3 diam Theta) / lambda
  double sep_threshold = 0.0;   // 2 C1 C3 diam Theta_k
  double piece_diameter = 0.0;  // diam Theta_k
  double e1_bound = 0.0;        // lambda * int phi
  double e1_worst = 0.0;        // max |K| / e1_bound
  bool e1_pass = false;
  double e2_worst = 0.0;        // max |K| on far-time samples
  double e2_bound = 0.0;        // lambda^-10
  bool e2_pass = false;
  double e3_C = 0.0;            // max |K| / envelope on separated samples
  double e3_C_refined = 0.0;
  double e3_drift = 0.0;
  bool e3_pass = false;
  std::size_t far_count = 0, sep_count = 0;
  bool far_empty = false, sep_empty = false;
  std::vector<EnvelopeRow> rows;
  bool pass = false;
};

// Family x + theta t^alpha; Theta_k is the decomposition piece of diameter
// lambda^-min(1, 2 alpha) at the left end of Theta.
EnvelopeReport envelope_check(const EnvelopeConfig& cfg);

// max{lambda^{1/2} d^{-1/2}, d^{-1/(2 alpha)}}
double e3_envelope(double lambda, double alpha, double d);

struct Crossover {
  double numeric = 0.0;
  double analytic = 0.0;  // lambda^{-alpha/(1-alpha)}
};
// Bisection in log d for the point where the two envelope branches meet.
Crossover envelope_crossover(double lambda, double alpha);

// |K| against tau along the stationary line Gamma = -2 lambda tau eta0.
ScalingFit stationary_sweep(double lambda, const std::vector<double>& taus, double eta0 = 1.0);

}  // namespace tanglab
