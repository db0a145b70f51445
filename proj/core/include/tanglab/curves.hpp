#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tanglab/theta.hpp"
#include "tanglab/types.hpp"

namespace tanglab {

enum class CurveForm { vertical, power_shift, general };

// gamma(x, t); power-shift is x + mu t^alpha.
struct CurveSpec {
  CurveForm form = CurveForm::vertical;
  Vec mu{0.0, 0.0};
  double alpha = 1.0;
  double C_alpha = 1.0;
  std::function<Vec(const Vec&, double)> table;

  static CurveSpec vertical();
  // C_alpha defaults to |mu|, the exact Hoelder constant of the form.
  static CurveSpec power_shift(Vec mu, double alpha, std::optional<double> C_alpha = {});
  static CurveSpec general(std::function<Vec(const Vec&, double)> fn, double alpha, double C_alpha);
  void validate() const;
};

// One-dimensional family gamma(x, t, theta) with declared constants for the
// bilipschitz (C1), Hoelder-in-t (C2) and Lipschitz-in-theta (C3) conditions.
struct CurveFamily {
  std::function<double(double x, double t, double theta)> eval;
  double C1 = 1.0, C2 = 1.0, C3 = 1.0;
  double alpha = 0.5;
  ThetaSet domain = ThetaSet::interval(0.5, 1.0);
  std::string name = "custom";

  // x + theta t^alpha on t in [0, 1]: C1 = 1, C2 = sup|theta|, C3 = 1.
  static CurveFamily theta_power(double alpha, ThetaSet domain);
};

Vec eval_curve(const CurveSpec& spec, const Vec& x, double t, std::optional<double> theta = {});
double eval_curve(const CurveFamily& fam, double x, double t, double theta);

struct ConditionResult {
  std::string name;
  double worst = 0.0;
  double declared = 0.0;
  bool pass = true;
};

struct ConditionReport {
  std::vector<ConditionResult> conditions;
  bool pass = true;
  const ConditionResult* find(const std::string& name) const;
};

// Randomized dyadic sampling of anchoring and the Hoelder quotient.
ConditionReport verify_conditions(const CurveSpec& spec, std::size_t samples, std::uint64_t seed);
// Anchoring and (C1)-(C3) for a 1D family, t in [0, 1].
ConditionReport verify_conditions(const CurveFamily& fam, std::size_t samples, std::uint64_t seed);

}  // namespace tanglab
