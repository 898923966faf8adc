#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "porcupine/cli.hpp"

using namespace porcupine;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"porcupine-cli"};
  argv.insert(argv.end(), args.begin(), args.end());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("float formatting is short, exact, and locale-free") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-2.5e-8) == "-2.5e-08");
  CHECK(format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(format_double(std::nan("")) == "null");
}

TEST_CASE("json writer emits keys in insertion order") {
  JsonWriter w;
  w.begin_object();
  w.key("b").value(2);
  w.key("a");
  w.begin_array();
  w.value(1.5);
  w.value(true);
  w.value("x\"y");
  w.end_array();
  w.key("c").null_value();
  w.end_object();
  CHECK(w.str() == "{\"b\":2,\"a\":[1.5,true,\"x\\\"y\"],\"c\":null}");
}

TEST_CASE("csv writer keeps the header and rows verbatim") {
  CsvWriter csv({"a", "b"});
  csv.row({"1", "x"});
  CHECK(csv.str() == "a,b\n1,x\n");
}

TEST_CASE("family configs load with defaults and fail loudly") {
  SECTION("empty path keeps the built-in family") {
    const cli::FamilyConfig cfg = cli::load_family("");
    CHECK(cfg.params.beta == 1.1);
    CHECK(cfg.params.lambda == 0.35);
    CHECK(cfg.params.c1 == 0.40);
  }
  SECTION("values override") {
    const char* path = "cli_test_family.json";
    {
      std::ofstream out(path);
      out << R"({"beta":1.05,"lambda":0.3,"c1":0.45,"shape_controls":{"a0":0.04,"N":33}})";
    }
    const cli::FamilyConfig cfg = cli::load_family(path);
    CHECK(cfg.params.beta == 1.05);
    CHECK(cfg.params.N == 33);
    CHECK(cfg.model.sigma_u == 3.0);
    std::remove(path);
  }
  SECTION("missing and malformed files throw usage errors") {
    CHECK_THROWS_AS(cli::load_family("/no/such/file.json"), std::invalid_argument);
    const char* path = "cli_test_bad.json";
    {
      std::ofstream out(path);
      out << "{not json";
    }
    CHECK_THROWS_AS(cli::load_family(path), std::invalid_argument);
    std::remove(path);
  }
}

TEST_CASE("end-to-end command runs through the library entry point") {
  SECTION("lyap reports the exact endpoint exponent") {
    const char* out = "cli_test_lyap.json";
    const int rc = run_cli({"lyap", "--word", "0", "--x", "0", "--n", "7", "--out", out});
    CHECK(rc == 0);
    const std::string text = slurp(out);
    CHECK(text.find("\"command\":\"lyap\"") != std::string::npos);
    CHECK(text.find("\"exponent\":0.0953101798043") != std::string::npos);
    std::remove(out);
  }
  SECTION("validate is deterministic byte for byte") {
    const char* out1 = "cli_test_val1.json";
    const char* out2 = "cli_test_val2.json";
    CHECK(run_cli({"validate", "--out", out1}) == 0);
    CHECK(run_cli({"validate", "--out", out2}) == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(!slurp(out1).empty());
    std::remove(out1);
    std::remove(out2);
  }
  SECTION("spectrum csv carries the documented columns") {
    const char* out = "cli_test_spec.csv";
    CHECK(run_cli({"spectrum", "--nmax", "3", "--format", "csv", "--out", out}) == 0);
    const std::string text = slurp(out);
    CHECK(text.rfind("word,fix,multiplier,exponent,stability,excluded\n", 0) == 0);
    CHECK(text.find("repelling") != std::string::npos);
    std::remove(out);
  }
  SECTION("usage errors exit with 2") {
    CHECK(run_cli({"fiber", "--seq", "not a sequence"}) == 2);
  }
  SECTION("degenerate sweep input exits with 2") {
    CHECK(run_cli({"sweep", "--lo", "0.5", "--hi", "0.5", "--out", "cli_test_sweep.json"}) == 2);
    std::remove("cli_test_sweep.json");
  }
}
