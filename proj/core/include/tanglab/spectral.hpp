#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tanglab/types.hpp"

namespace tanglab {

struct FrequencyAtom {
  Vec xi{0.0, 0.0};
  double w = 1.0;
  cplx c{1.0, 0.0};
};

enum class SymbolKind { paraboloid, modulus_power, first_coordinate_power };

// Phase P(xi) of the propagator e^{itP(D)}.
struct SymbolSpec {
  SymbolKind kind = SymbolKind::paraboloid;
  double m = 2.0;

  static SymbolSpec paraboloid() { return {SymbolKind::paraboloid, 2.0}; }
  static SymbolSpec modulus_power(double m) { return {SymbolKind::modulus_power, m}; }
  static SymbolSpec first_coordinate_power(double m) { return {SymbolKind::first_coordinate_power, m}; }

  // xi_1^m uses the signed power for integral m and |xi_1|^m otherwise.
  double operator()(const Vec& xi) const;
  // Upper bound for |grad P| on the ball |xi| <= band.
  double grad_sup(double band) const;
  void validate() const;
};

struct SobolevSpec {
  double s = 0.0;
};

struct Provenance {
  std::string recipe = "explicit";
  std::uint64_t seed = 0;
  double resolution = 0.0;  // nodes per unit frequency per axis, 0 for discrete data
  double spacing = 0.0;     // node spacing h, 0 for discrete data
  std::map<std::string, double> params;
};

// Finite quadrature representation f(x) = sum w c e^{i x.xi}.
class BandlimitedField {
 public:
  BandlimitedField(int dim, std::vector<FrequencyAtom> atoms, Provenance prov = {});

  int dim() const { return dim_; }
  const std::vector<FrequencyAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double band() const { return band_; }
  const Provenance& provenance() const { return prov_; }
  // sum w |c|
  double l1_mass() const;

 private:
  int dim_;
  std::vector<FrequencyAtom> atoms_;
  double band_ = 0.0;
  Provenance prov_;
};

// Resolution rule h * (x_max + t_max * sup|grad P|) <= 0.5; a no-op for discrete data.
void check_resolution(const BandlimitedField& f, const SymbolSpec& P, double x_max, double t_max);
double resolution_margin(const BandlimitedField& f, const SymbolSpec& P, double x_max, double t_max);

std::vector<cplx> evaluate_field(const BandlimitedField& f, const std::vector<Vec>& points);
double sobolev_norm(const BandlimitedField& f, SobolevSpec s);
std::vector<BandlimitedField> littlewood_paley_split(const BandlimitedField& f);
// Index k of the dyadic piece containing frequency magnitude r.
int dyadic_index(double r);

enum class RecipeKind { cube, ball, gaussian, random_annulus, sobolev_random };

struct FieldRecipe {
  RecipeKind kind = RecipeKind::gaussian;
  int dim = 1;
  double R = 1.0;            // cube corner, ball radius, annulus band, sobolev band
  double sigma = 1.0;        // gaussian: f^ = exp(-|xi|^2 / sigma^2)
  double extent = 8.0;       // gaussian: truncation half-width
  double resolution = 8.0;   // nodes per unit frequency per axis
  std::size_t nodes = 0;     // overrides resolution when nonzero (per axis)
  std::uint64_t seed = 0;
  double decay = 0.0;        // sobolev_random: coefficients (1+|xi|^2)^{-decay/2-1/4}
  // Evaluation window for the resolution rule; unchecked when symbol is empty.
  double x_max = 0.0;
  double t_max = 0.0;
  std::optional<SymbolSpec> symbol;
};

BandlimitedField make_field(const FieldRecipe& r);

// Kahan accumulator for complex sums.
struct KahanSum {
  double re = 0, im = 0, cre = 0, cim = 0;
  void add(double a, double b) {
    const double yr = a - cre;
    const double tr = re + yr;
    cre = (tr - re) - yr;
    re = tr;
    const double yi = b - cim;
    const double ti = im + yi;
    cim = (ti - im) - yi;
    im = ti;
  }
  cplx value() const { return {re, im}; }
};

}  // namespace tanglab
