#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tanglab/curves.hpp"
#include "tanglab/spectral.hpp"

namespace tanglab {

struct SpaceTimePoint {
  Vec x{0.0, 0.0};
  double t = 0.0;
};

// Row-major complex matrix.
struct CMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<cplx> data;
  CMatrix() = default;
  CMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  cplx& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// Structure-of-arrays copy of a field with P(xi) precomputed; the evaluation
// kernel shared by evolve and the scanning modules. No resolution check.
class PreparedEvolution {
 public:
  PreparedEvolution(const BandlimitedField& f, const SymbolSpec& P);
  cplx operator()(const Vec& x, double t) const;
  std::size_t size() const { return x0_.size(); }

 private:
  std::vector<double> x0_, x1_, p_, wre_, wim_;
};

// sum w c e^{i(x.xi + t P(xi))}; at t = 0 the phase is x.xi exactly, so the
// result is bitwise equal to evaluate_field.
std::vector<cplx> evolve(const BandlimitedField& f, const SymbolSpec& P, const std::vector<SpaceTimePoint>& pts);
cplx evolve_one(const BandlimitedField& f, const SymbolSpec& P, const SpaceTimePoint& pt);

// Entry (i, j) is evolve at (gamma(x_i, t_j), t_j).
CMatrix evolve_along_curve(const BandlimitedField& f, const SymbolSpec& P, const CurveSpec& curve,
                           const std::vector<Vec>& xs, const std::vector<double>& ts,
                           std::optional<double> theta = {});
CMatrix evolve_along_curve(const BandlimitedField& f, const SymbolSpec& P, const CurveFamily& fam,
                           const std::vector<Vec>& xs, const std::vector<double>& ts, double theta);

// Weighted shift majorant: LHS <= C * sum_l weight(l) |term(l)|.
struct MajorantSample {
  double lhs = 0.0;
  double rhs = 0.0;          // truncated at L
  double rhs_doubled = 0.0;  // truncated at 2L
  double tail = 0.0;         // bound on the omitted part of the L-truncated sum
};

struct MajorantReport {
  std::vector<MajorantSample> samples;
  int truncation = 1;
  double fitted_C = 0.0;       // max lhs / rhs over the samples
  double C_bound = 0.0;
  double worst_tail_use = 0.0;  // max |rhs_doubled - rhs| / tail
  bool tail_consistent = true;
  bool pass = false;
};

// Sum over l in Z^n with |l|_inf > L of (1 + |l|)^-q, bounded by the matching integral.
double lattice_tail(int n, double q, int L);

// Shift expansion for an annulus-supported field along gamma(x,t) at t in (0, lambda^{-1/alpha}):
// |e^{itP}f(gamma(x,t))| <= C sum_l (1+|l|)^{-(n+1)} |e^{itP}f(x + l/lambda)|.
MajorantReport shift_expansion_check(const BandlimitedField& f, const SymbolSpec& P, const CurveSpec& curve,
                                     const std::vector<Vec>& xs, const std::vector<double>& ts, int L,
                                     double C_bound = 50.0);

// Frequency-localized version in the plane: supp f^ in B(xi0, rho^-alpha),
// (x, t) in B(x0, rho) x (t0, t0 + rho), curve point R gamma(t / R^2), shifts rho^alpha l,
// weights (1+|l|)^-100.
struct LocalizedShiftSetup {
  double R = 64.0;
  double rho = 8.0;
  Vec x0{0.0, 0.0};
  double t0 = 0.0;
  int samples = 100;
  std::uint64_t seed = 1;
  int truncation = 1;
  double C_bound = 50.0;
};

MajorantReport shift_expansion_local(const BandlimitedField& f, const CurveSpec& curve,
                                     const LocalizedShiftSetup& setup);

// Locally constant version: supp f^ in a ball of radius rho^-1; terms are
// rho^-3 (1+|l|)^-100 (1+|m|)^-100 times the space-time L1 mass of the
// rho(l+m)-shifted evolution on B(x0, rho) x (t0, t0 + rho).
MajorantReport shift_expansion2(const BandlimitedField& f, const CurveSpec& curve, const LocalizedShiftSetup& setup,
                                int quad_nodes = 8);

}  // namespace tanglab
