#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "tanglab/propagator.hpp"
#include "tanglab/spectral.hpp"
#include "tanglab/theta.hpp"

namespace tanglab {

// Shortest decimal form that round-trips.
std::string format_double(double v);

// RFC-4180 quoting: fields with comma, quote, CR or LF are quoted, quotes doubled.
std::string csv_escape(const std::string& field);

// Rows end in CRLF.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void row(const std::vector<std::string>& cells);
  void row(const std::vector<double>& cells);

 private:
  std::ostream& os_;
};

// {"recipe", "seed", "resolution", "band"}
std::string provenance_json(const BandlimitedField& f);

// xi_1, xi_2, weight, re_c, im_c
void write_atoms_csv(std::ostream& os, const BandlimitedField& f);
// Accepts the layout above; throws InputError with the offending line.
BandlimitedField read_atoms_csv(std::istream& is, int dim);

// x_1[, x_2], t, re, im, modulus
void write_propagator_csv(std::ostream& os, int dim, const std::vector<SpaceTimePoint>& pts, const std::vector<cplx>& values);

// delta, N
void write_cover_csv(std::ostream& os, const DimensionFit& fit);

}  // namespace tanglab
