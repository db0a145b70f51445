#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tanglab/curves.hpp"
#include "tanglab/fit.hpp"
#include "tanglab/spectral.hpp"

namespace tanglab {

enum class TimeRule { derivative, fixed };

struct GridSpec {
  int dim = 1;
  Vec center{0.0, 0.0};
  double radius = 1.0;
  double dx = 0.01;
  // Time window (t_min, T]; the sample at t_min stands in for the 0+ limit.
  double t_min = 0.0;
  double T = 1.0;
  TimeRule rule = TimeRule::derivative;
  // Derivative rule: dt = min(T,1) / (8 ceil(lambda^m sum w|c| / eps_abs)).
  // eps_abs <= 0 means eps_rel * sum w|c|.
  double eps_abs = 0.0;
  double eps_rel = 0.05;
  std::size_t steps = 256;  // fixed rule
  std::size_t max_steps = 200000;
  double refine_tol = 1e-3;
  std::vector<double> thetas;  // family parameter samples

  // Cell centres of the axis-aligned lattice restricted to the ball.
  std::vector<Vec> points() const;
  // Measure of one lattice cell (step^dim).
  double cell() const;
  double step() const;
};

// Uniform samples t_min + k dt, k = 0..K.
std::vector<double> time_grid(const GridSpec& grid, const BandlimitedField& f, const SymbolSpec& P);

struct MaximalResult {
  std::vector<Vec> xs;
  std::vector<double> coarse;
  std::vector<double> refined;
  std::vector<double> t_arg;
  std::vector<double> theta_arg;
  std::size_t time_steps = 0;
  double dt = 0.0;
};

// Requires dx <= 1/(2 lambda); throws ConfigError otherwise.
void validate_grid(const GridSpec& grid, const BandlimitedField& f);

MaximalResult maximal_function(const BandlimitedField& f, const SymbolSpec& P, const CurveSpec& curve,
                               const GridSpec& grid);
// Sup over the grid thetas as well (1D families only).
MaximalResult maximal_function(const BandlimitedField& f, const SymbolSpec& P, const CurveFamily& fam,
                               const GridSpec& grid);

// (sum |v|^p cell)^{1/p}
double lp_norm(const std::vector<double>& values, double p, const GridSpec& grid);

double operator_ratio(const BandlimitedField& f, const SymbolSpec& P, const CurveSpec& curve, const GridSpec& grid,
                      double p, double s);

ScalingFit exponent_fit(const std::vector<double>& lambdas, const std::vector<double>& ratios);

// A named lambda-indexed test function together with the grid on which its
// maximal function is scanned.
struct Witness {
  std::string name;
  std::function<BandlimitedField(double lambda)> field;
  std::function<GridSpec(double lambda)> grid;
};

struct BatteryResult {
  std::vector<double> lambdas;
  std::vector<std::string> names;
  std::vector<std::vector<double>> ratios;  // [witness][lambda]
  std::vector<ScalingFit> fits;
  std::vector<double> envelope;
  ScalingFit envelope_fit;
  std::optional<double> threshold;
  std::vector<std::string> flagged;  // fitted slope above threshold + 0.15
};

BatteryResult battery_scan(const SymbolSpec& P, const CurveSpec& curve, double p, double s,
                           const std::vector<double>& lambdas, const std::vector<Witness>& battery,
                           std::optional<double> threshold = {});

}  // namespace tanglab
