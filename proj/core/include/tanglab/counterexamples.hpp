#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tanglab/curves.hpp"
#include "tanglab/fit.hpp"
#include "tanglab/maximal.hpp"
#include "tanglab/spectral.hpp"

namespace tanglab {

// f^ = indicator of Q_R = [R, R+1]^n, observed along x + mu t^alpha with
// mu = (1/1000, 0) under P = xi_1^m.
struct CubeWitness {
  double R = 256.0;
  int dim = 1;
  double m = 2.0;
  double alpha = 0.75;
  double resolution = 64.0;  // nodes per unit frequency per axis

  // 1 when alpha >= 1/m (t0 = R^-m / 100), 2 otherwise (t0 = R^{-1/alpha}).
  int regime() const;
  double default_t0() const;
  BandlimitedField field() const;
  CurveSpec curve() const;
  SymbolSpec symbol() const { return SymbolSpec::first_coordinate_power(m); }
};

struct CubeMainTerm {
  int regime = 1;
  double t0 = 0.0;
  double main = 0.0;
  double remainder_bound = 0.0;
  double main_floor = 0.0;       // 1/200 or 1/2000
  double remainder_cap = 0.0;    // (e-2)/625 or (e-2)/250000
  double pass_level = 0.0;       // main_floor - remainder_cap
  bool pass = false;             // main - remainder_bound >= pass_level
};

// Throws PreconditionError naming the violated size condition on R.
CubeMainTerm cube_main_term(const CubeWitness& w, const Vec& x, std::optional<double> t0 = {});

struct RateExponent {
  ScalingFit fit;
  double target = 0.0;
  int regime = 1;
};

// L1(B(0,1/1000)) norm of t0^{-delta1} |e^{it0 P(D)} f_R(gamma(x,t0)) - f_R(x)| against R.
RateExponent cube_rate_exponent(const CubeWitness& w, double delta1, const std::vector<double>& Rs,
                                std::size_t grid_points = 64);

// f^ = indicator of B(0, lambda^{1/2}) in 1D, observed along x + sign t^alpha.
struct HalfScaleWitness {
  double lambda = 1024.0;
  double alpha = 0.5;
  double sign = -1.0;
  BandlimitedField field() const;
  CurveSpec curve() const;
};

struct HalfScaleReport {
  double measure = 0.0;          // swept |S|
  double exact_measure = 0.0;    // lambda^{-1/2}/50 + (lambda^{-1}/100)^alpha
  double sweep_step = 0.0;
  std::vector<double> xs;        // sampled members of S
  std::vector<double> ts;        // the inclusion time used for each member
  std::vector<double> moduli;    // |e^{itΔ}f(gamma(x,t))| at that time
  double min_modulus = 0.0;
  double floor = 0.0;            // lambda^{1/2}
  bool bound_holds = false;      // min_modulus >= floor
};

// S = {x : |x + sign t^alpha| <= lambda^{-1/2}/100 for some t in (0, lambda^{-1}/100)}.
// `samples` = 0 evaluates every swept member.
HalfScaleReport halfscale_S_set(const HalfScaleWitness& w, std::size_t samples = 0);

struct SharpPReport {
  double alpha = 0.0, s = 0.0;
  std::vector<double> lambdas;
  ScalingFit measure_fit;  // |S| against lambda
  ScalingFit norm_fit;     // ||f||_{H^s} against lambda
  std::vector<double> ps;
  std::vector<double> differences;  // lhs slope - rhs slope per p
  double threshold = 0.0;           // largest grid p with difference <= 0
  double claim = 0.0;               // 4, 8 alpha or 2
  bool saturated = false;           // no sign change on the p grid
};

// Claimed endpoint for the regimes alpha in [1/2,1), (1/4,1/2), (0,1/4].
double sharp_p_claim(double alpha);

SharpPReport sharp_p_threshold(double alpha, double s, const std::vector<double>& lambdas, double p_lo = 1.0,
                               double p_hi = 12.0, double p_step = 0.01);

// Strips A_{R,l} = [R - R^{1/2}, R + R^{1/2}] x [R^{2/3} l, R^{2/3} l + 1], l = L..2L-1, L = ceil(R^{1/3}).
struct BourgainWitness {
  double R = 256.0;
  int strip_lo() const;
  int strip_count() const;
  // |A_R| = strip_count * 2 R^{1/2}
  double support_measure() const;
  // Node spacing admitting |x| <= 1, t <= 1/R.
  double spacing() const;
  BandlimitedField field() const;
};

// Separable evaluation of e^{itΔ}f_R(x) as F1(x1,t) F2(x2,t).
class BourgainEvaluator {
 public:
  explicit BourgainEvaluator(const BourgainWitness& w);
  cplx operator()(const Vec& x, double t) const;
  // sup over t in (0, 1/R) by a coarse F1 scan, a pruned fine scan and a
  // golden-section refinement.
  double sup_time(const Vec& x, double* t_arg = nullptr) const;

 private:
  cplx axis_sum(const std::vector<double>& nodes, double w, double x, double t) const;
  double R_;
  std::vector<double> n1_, n2_;
  double w1_ = 0, w2_ = 0;
};

struct BourgainPoint {
  double R = 0.0;
  double norm2 = 0.0;       // ||f_R||_2 (Plancherel-free: sqrt of sum w |c|^2)
  double level = 0.0;       // quantile of sup_t over the x samples
  double max_modulus = 0.0;
  double fraction_above = 0.0;  // share of samples with sup >= R^{3/4}/2
  double measure_above = 0.0;   // fraction_above * |B(0,1)|
};

struct BourgainReport {
  std::vector<BourgainPoint> points;
  ScalingFit norm_fit;
  ScalingFit level_fit;
  ScalingFit max_fit;
  double quantile = 0.75;
  double s_threshold = 0.0;  // level slope - norm slope
  bool partial = false;      // schedule cut by the budget
};

BourgainReport bourgain_growth(const std::vector<double>& Rs, std::size_t samples = 256, std::uint64_t seed = 1,
                               double quantile = 0.75, double budget_seconds = 0.0);

struct BatteryOptions {
  std::vector<std::string> names{"cube", "cube-wide", "half-scale", "ball", "random-phase", "chirp"};
  double mu = 1.0;          // curve displacement bound used for the resolution rule
  std::uint64_t seed = 7;
};

// Known names: cube, cube-wide, half-scale, ball, random-phase, chirp (1D).
std::vector<Witness> witness_battery(const BatteryOptions& opt);

}  // namespace tanglab
