#include "tanglab/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace tanglab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os_ << ',';
    os_ << csv_escape(cells[i]);
  }
  os_ << "\r\n";
}

void CsvWriter::row(const std::vector<double>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (const double v : cells) s.push_back(format_double(v));
  row(s);
}

std::string provenance_json(const BandlimitedField& f) {
  nlohmann::ordered_json j;
  j["recipe"] = f.provenance().recipe;
  j["seed"] = f.provenance().seed;
  j["resolution"] = f.provenance().resolution;
  j["band"] = f.band();
  return j.dump();
}

void write_atoms_csv(std::ostream& os, const BandlimitedField& f) {
  CsvWriter w(os);
  w.row(std::vector<std::string>{"xi_1", "xi_2", "weight", "re_c", "im_c"});
  for (const auto& a : f.atoms()) w.row(std::vector<double>{a.xi[0], a.xi[1], a.w, a.c.real(), a.c.imag()});
}

BandlimitedField read_atoms_csv(std::istream& is, int dim) {
  std::vector<FrequencyAtom> atoms;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("xi_1", 0) == 0) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      double x = 0.0;
      const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (r.ec != std::errc() || r.ptr != cell.data() + cell.size() || !std::isfinite(x))
        throw InputError("atoms line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      v.push_back(x);
    }
    if (v.size() != 5) throw InputError("atoms line " + std::to_string(lineno) + ": expected 5 fields");
    if (dim == 1 && v[1] != 0.0) throw InputError("atoms line " + std::to_string(lineno) + ": xi_2 must be 0 in 1D");
    atoms.push_back({{v[0], v[1]}, v[2], {v[3], v[4]}});
  }
  Provenance p;
  p.recipe = "csv";
  return BandlimitedField(dim, std::move(atoms), p);
}

void write_propagator_csv(std::ostream& os, int dim, const std::vector<SpaceTimePoint>& pts, const std::vector<cplx>& values) {
  CsvWriter w(os);
  if (dim == 1)
    w.row(std::vector<std::string>{"x_1", "t", "re", "im", "modulus"});
  else
    w.row(std::vector<std::string>{"x_1", "x_2", "t", "re", "im", "modulus"});
  for (std::size_t i = 0; i < pts.size() && i < values.size(); ++i) {
    std::vector<double> r{pts[i].x[0]};
    if (dim == 2) r.push_back(pts[i].x[1]);
    r.insert(r.end(), {pts[i].t, values[i].real(), values[i].imag(), std::abs(values[i])});
    w.row(r);
  }
}

void write_cover_csv(std::ostream& os, const DimensionFit& fit) {
  CsvWriter w(os);
  w.row(std::vector<std::string>{"delta", "N"});
  for (std::size_t i = 0; i < fit.deltas.size() && i < fit.counts.size(); ++i)
    w.row(std::vector<std::string>{format_double(fit.deltas[i]), std::to_string(fit.counts[i])});
}

}  // namespace tanglab
