#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qfa/demos.hpp"
#include "qfa/io.hpp"

// End-to-end checks of the installed command-line tool: exit codes, output
// formats, and reproducibility of demos from exported machine files.

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qfa_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args, const fs::path& out_file) {
  const std::string cmd = std::string(QFA_CLI_PATH) + " " + args + " > " + out_file.string() +
                          " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("equiv exit codes encode the verdict") {
  TempDir tmp;
  qfa::write_json_file(qfa::serialize_mcqfa(qfa::build_modp_2state(5, 1)), (tmp.path / "k1.json").string());
  qfa::write_json_file(qfa::serialize_mcqfa(qfa::build_modp_2state(5, 4)), (tmp.path / "k4.json").string());
  qfa::write_json_file(qfa::serialize_mcqfa(qfa::build_modp_2state(5, 2)), (tmp.path / "k2.json").string());

  const fs::path out = tmp.path / "out.txt";
  CHECK(run_cli("equiv " + (tmp.path / "k1.json").string() + " " + (tmp.path / "k1.json").string(),
                out) == 0);
  CHECK(run_cli("equiv --exact " + (tmp.path / "k1.json").string() + " " +
                    (tmp.path / "k4.json").string(),
                out) == 0);
  CHECK(slurp(out).find("arithmetic: exact") != std::string::npos);

  CHECK(run_cli("equiv --exact " + (tmp.path / "k1.json").string() + " " +
                    (tmp.path / "k2.json").string(),
                out) == 1);
  const std::string inequal = slurp(out);
  CHECK(inequal.find("witness: a") != std::string::npos);

  CHECK(run_cli("equiv " + (tmp.path / "k1.json").string() + " /nonexistent.json", out) == 2);
}

TEST_CASE("run command evaluates words from a machine file") {
  TempDir tmp;
  const fs::path machine = tmp.path / "mod5.json";
  qfa::write_json_file(qfa::serialize_mcqfa(qfa::build_modp_2state(5, 1)), machine.string());
  const fs::path out = tmp.path / "out.txt";
  REQUIRE(run_cli("run " + machine.string() + " --word a --word aaaaa", out) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("0.0954915028125") != std::string::npos);

  // classification in the one-sided mode
  REQUIRE(run_cli("classify " + machine.string() +
                      " --word a --word aaaaa --mode negative-one-sided",
                  out) == 0);
  const std::string classified = slurp(out);
  CHECK(classified.find("nonmember") != std::string::npos);
  CHECK(classified.find("member") != std::string::npos);

  // exact arithmetic run shows rational values
  REQUIRE(run_cli("run --exact " + machine.string() + " --word aaaaa", out) == 0);
  CHECK(slurp(out).find("value (exact)") != std::string::npos);

  // an empty word list yields an empty report, not an error
  REQUIRE(run_cli("run " + machine.string(), out) == 0);
}

TEST_CASE("csv and json outputs carry identical numbers") {
  TempDir tmp;
  const fs::path machine = tmp.path / "mod5.json";
  qfa::write_json_file(qfa::serialize_mcqfa(qfa::build_modp_2state(5, 1)), machine.string());
  const fs::path csv = tmp.path / "out.csv";
  const fs::path js = tmp.path / "out.json";
  REQUIRE(run_cli("run " + machine.string() + " --word a --format csv", csv) == 0);
  REQUIRE(run_cli("run " + machine.string() + " --word a --format json-like", js) == 0);
  CHECK(slurp(csv).find("0.0954915028125") != std::string::npos);
  CHECK(slurp(js).find("0.0954915028125") != std::string::npos);
}

TEST_CASE("demo export is reproducible from the file alone") {
  TempDir tmp;
  const fs::path exported = tmp.path / "eq15.json";
  const fs::path out = tmp.path / "out.txt";
  REQUIRE(run_cli("demo eq-15kwqfa --export " + exported.string(), out) == 0);
  REQUIRE(fs::exists(exported));
  REQUIRE(run_cli("run " + exported.string() + " --word ab --word aab", out) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("0.5") != std::string::npos);

  REQUIRE(run_cli("demo modp-log --p 31 --eps 0.25 --seed 7", out) == 0);
  CHECK(slurp(out).find("redraws") != std::string::npos);

  // flagship demo rows: EQ accepts "ab" with probability 1, PAL never
  // rejects the palindrome "aba" in the quantum phase
  REQUIRE(run_cli("demo eq-2qcfa --word ab --format csv", out) == 0);
  CHECK(slurp(out).find("ab,yes,0,1,-") != std::string::npos);
  REQUIRE(run_cli("demo pal-2qcfa --word aba --format csv", out) == 0);
  CHECK(slurp(out).find("aba,yes,0,-,0") != std::string::npos);

  // unknown demo name fails cleanly
  CHECK(run_cli("demo unknown-demo", out) == 2);
}

TEST_CASE("bench prints a scaling table") {
  TempDir tmp;
  const fs::path out = tmp.path / "out.txt";
  REQUIRE(run_cli("bench eq-2qcfa --max-m 2 --trials 200 --seed 5", out) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("mean steps") != std::string::npos);
}
