#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("tanglab_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  static int& counter() {
    static int n = 0;
    return n;
  }
  int run(const std::string& args) const {
    const std::string cmd = "TANGLAB_OUTPUT_DIR='" + dir.string() + "' '" TANGLAB_CLI "' " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }
  std::size_t files() const { return std::distance(fs::directory_iterator(dir), fs::directory_iterator{}); }
  nlohmann::json json(const std::string& name) const {
    std::ifstream is(dir / name);
    return nlohmann::json::parse(is);
  }
  std::string text(const std::string& name) const {
    std::ifstream is(dir / name);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  }
};

}  // namespace

TEST_CASE("successful run writes config, data and summary") {
  Scratch s;
  CHECK(s.run("run dimension --set interval --out iv") == 0);
  CHECK(fs::exists(s.dir / "iv_config.json"));
  CHECK(fs::exists(s.dir / "iv_covers.csv"));
  const auto sum = s.json("iv_summary.json");
  CHECK(sum["kind"] == "dimension");
  CHECK(sum["pass"]["all"] == true);
  CHECK(sum["inputs"]["set"] == "interval");
  CHECK(s.text("iv_covers.csv").rfind("delta,N\r\n", 0) == 0);
}

TEST_CASE("malformed flags exit 2 without artifacts") {
  Scratch s;
  CHECK(s.run("propagate --nx abc") == 2);
  CHECK(s.run("propagate --no-such-flag 1") == 2);
  CHECK(s.run("propagate --symbol cubic") == 2);
  CHECK(s.run("counterexample") == 2);
  CHECK(s.run("broad-norm --K 1") == 2);
  CHECK(s.run("maximal-scan --lambda-schedule 64..128") == 2);
  CHECK(s.files() == 0);
}

TEST_CASE("malformed config reports its position and exits 2") {
  Scratch s;
  const auto bad = s.dir / "bad.json";
  std::ofstream(bad) << "{\"command\": [\"dimension\"],\n \"options\": {\"set\": }\n}\n";
  const std::string cmd = "'" TANGLAB_CLI "' --config '" + bad.string() + "' 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  char buf[256];
  while (fgets(buf, sizeof buf, p)) out += buf;
  const int rc = pclose(p);
  CHECK(WEXITSTATUS(rc) == 2);
  CHECK(out.find(":2:") != std::string::npos);
  CHECK(s.files() == 1);
}

TEST_CASE("config replay reproduces the run") {
  Scratch s;
  REQUIRE(s.run("propagate --recipe random_annulus --band 2 --resolution 16 --nx 9 --nt 3 --curve power_shift --out a") == 0);
  CHECK(s.run("--config '" + (s.dir / "a_config.json").string() + "' --out b") == 0);
  CHECK(s.text("a_propagator.csv") == s.text("b_propagator.csv"));
  CHECK(s.json("a_summary.json")["inputs"] == s.json("b_summary.json")["inputs"]);
  CHECK(s.run("--config '" + (s.dir / "a_config.json").string() + "' --out c --nt 2") == 0);
  CHECK(s.json("c_summary.json")["inputs"]["nt"] == "2");
}

TEST_CASE("failing checks exit 1 with a summary") {
  Scratch s;
  CHECK(s.run("verify-curve --alpha 0.5 --C-alpha 0.5 --out v") == 1);
  CHECK(s.json("v_summary.json")["pass"]["all"] == false);
}

TEST_CASE("budget exhaustion exits 3 with partial artifacts") {
  Scratch s;
  CHECK(s.run("counterexample bourgain --R 256..8192 --samples 64 --budget 0.001 --out b") == 3);
  CHECK(fs::exists(s.dir / "b_growth.csv"));
  CHECK(s.json("b_summary.json")["metrics"]["partial"] == true);
}

TEST_CASE("summary schema is shared by all experiments") {
  Scratch s;
  for (const std::string cmd : {"dimension --set point", "verify-curve", "counterexample cube-rate --R 64..512",
                                "counterexample sharp-p --alpha 0.4 --s 0.26", "broad-norm --A 2"}) {
    const int rc = s.run(cmd + " --out x");
    CHECK((rc == 0 || rc == 1));
    const auto j = s.json("x_summary.json");
    CHECK(j.is_object());
    CHECK(j.size() == 4);
    CHECK(j["kind"].is_string());
    CHECK(j["inputs"].is_object());
    CHECK(j["metrics"].is_object());
    CHECK(j["pass"]["all"].is_boolean());
    CHECK(j["pass"]["checks"].is_object());
  }
}
