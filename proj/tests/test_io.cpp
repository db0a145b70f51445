#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "tanglab/io.hpp"

using namespace tanglab;

TEST_SUITE("io") {
  TEST_CASE("doubles round-trip through text") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-300.0, 300.0);
    for (int i = 0; i < 2000; ++i) {
      const double v = std::ldexp(U(rng), static_cast<int>(U(rng)));
      CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(3.0) == "3");
  }

  TEST_CASE("csv quoting") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
    std::ostringstream os;
    CsvWriter w(os);
    w.row(std::vector<std::string>{"x", "y,z"});
    w.row(std::vector<double>{1.0, 0.25});
    CHECK(os.str() == "x,\"y,z\"\r\n1,0.25\r\n");
  }

  TEST_CASE("atoms round-trip") {
    FieldRecipe r;
    r.kind = RecipeKind::random_annulus;
    r.dim = 2;
    r.R = 2.0;
    r.seed = 4;
    const auto f = make_field(r);
    std::stringstream ss;
    write_atoms_csv(ss, f);
    const auto g = read_atoms_csv(ss, 2);
    REQUIRE(g.size() == f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      CHECK(g.atoms()[i].xi == f.atoms()[i].xi);
      CHECK(g.atoms()[i].w == f.atoms()[i].w);
      CHECK(g.atoms()[i].c == f.atoms()[i].c);
    }
  }

  TEST_CASE("malformed atom files name the line") {
    std::stringstream ss("xi_1,xi_2,weight,re_c,im_c\r\n1,0,1,1,0\r\n2,0,abc,1,0\r\n");
    try {
      read_atoms_csv(ss, 1);
      FAIL("expected InputError");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
    std::stringstream nan("xi_1,xi_2,weight,re_c,im_c\n1,0,nan,1,0\n");
    CHECK_THROWS_AS(read_atoms_csv(nan, 1), InputError);
  }

  TEST_CASE("provenance json") {
    FieldRecipe r;
    r.kind = RecipeKind::gaussian;
    r.sigma = 1.0;
    r.extent = 2.0;
    const auto s = provenance_json(make_field(r));
    CHECK(s.find("\"recipe\":\"gaussian\"") != std::string::npos);
    CHECK(s.find("\"resolution\":8") != std::string::npos);
  }
}
