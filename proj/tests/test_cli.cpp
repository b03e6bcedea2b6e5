#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// end-to-end tests of the command-line front end; every documented exit code
// is exercised here

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

int counter = 0;

RunResult run(const std::string& args) {
  const std::string out_file = std::string(CLI_WORK_DIR) + "/cli_out_" + std::to_string(counter++);
  const std::string command = std::string(CHAOSBOUND_CLI) + " " + args + " > " + out_file + " 2>&1";
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_file);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  return result;
}

std::string write_fixture(const std::string& name, const std::string& content) {
  const std::string path = std::string(CLI_WORK_DIR) + "/" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("analyze prints the khatri-rao table") {
  const RunResult r = run("analyze --builtin khatri-rao-q2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("sigma = max{d, n^{1/2}}") != std::string::npos);
  CHECK(r.output.find("d^2") != std::string::npos);
}

TEST_CASE("analyze accepts schema files and size overrides") {
  const std::string path = write_fixture("kr.json", R"({
    "p": 3, "dims": [2, 2, 9], "q": 2,
    "chaos_coords": [[0, 2], [1, 2]],
    "row_coord": [0, 1], "col_coord": [2],
    "distribution": {"kind": "gaussian"},
    "labels": ["j1", "j2", "k"]
  })");
  const RunResult r = run("analyze " + path);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("S2") != std::string::npos);  // default symbol for index 2
}

TEST_CASE("analyze exits 2 on malformed JSON") {
  const std::string path = write_fixture("broken.json", "{ not json");
  const RunResult r = run("analyze " + path);
  CHECK(r.exit_code == 2);
}

TEST_CASE("analyze exits 2 with a violation list on invalid schemas") {
  const std::string path = write_fixture("invalid.json", R"({
    "p": 2, "dims": [2, 2], "q": 1,
    "chaos_coords": [[0, 5]],
    "row_coord": [0], "col_coord": [1]
  })");
  const RunResult r = run("analyze " + path);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("\"violations\"") != std::string::npos);
  CHECK(r.output.find("index_out_of_range") != std::string::npos);
}

TEST_CASE("analyze csv format emits the table") {
  const RunResult r = run("analyze --builtin tensor-pca-2 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("class,placement") != std::string::npos);
}

TEST_CASE("graph analyzes builtin shapes and rejects invalid ones") {
  const RunResult star = run("graph --builtin star");
  CHECK(star.exit_code == 0);
  CHECK(star.output.find("poly exponent: 3") != std::string::npos);
  CHECK(star.output.find("W_iso: {o}") != std::string::npos);
  CHECK(star.output.find("k1=2 k2=0") != std::string::npos);

  const std::string bad = write_fixture("bad_shape.json", R"({
    "vertices": ["a"], "left": ["a"], "right": ["a"], "edges": [["a", "a"]]
  })");
  const RunResult invalid = run("graph " + bad);
  CHECK(invalid.exit_code == 2);

  const std::string edgeless = write_fixture("edgeless.json", R"({
    "vertices": ["u"], "left": ["u"], "right": ["u"], "edges": []
  })");
  const RunResult det = run("graph " + edgeless);
  CHECK(det.exit_code == 0);
  CHECK(det.output.find("deterministic") != std::string::npos);
  CHECK(det.output.find("norm 1") != std::string::npos);
}

TEST_CASE("verify passes on builtin schemas") {
  const RunResult kr = run("verify --builtin khatri-rao-q2 --dims d=3,n=4");
  CHECK(kr.exit_code == 0);
  CHECK(kr.output.find("all rows pass") != std::string::npos);

  const RunResult psi = run("verify --builtin ellipsoid-psi --dims m=3,d=2");
  CHECK(psi.exit_code == 0);
  CHECK(psi.output.find("upper-bound rows") != std::string::npos);
}

TEST_CASE("verify exits 3 when a formula is corrupted") {
  const RunResult r = run("verify --builtin khatri-rao-q2 --inject-exponent-bug");
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("MISMATCH") != std::string::npos);
}

TEST_CASE("verify exits 4 beyond the oracle cap") {
  const RunResult r = run("verify --builtin khatri-rao-q2 --dims d=100,n=4 --cap 512");
  CHECK(r.exit_code == 4);
}

TEST_CASE("sample rejects zero trials with a usage error") {
  const RunResult r = run("sample --builtin khatri-rao-q2 --trials 0");
  CHECK(r.exit_code == 64);
}

TEST_CASE("unknown flags are usage errors") {
  const RunResult r = run("sample --no-such-flag");
  CHECK(r.exit_code == 64);
}

TEST_CASE("sample exits 4 when the lattice cap is exceeded") {
  const RunResult r = run("sample --builtin khatri-rao-q2 --dims d=4096,n=4096 --trials 1");
  CHECK(r.exit_code == 4);
}

TEST_CASE("sample writes deterministic csv for a fixed seed") {
  const std::string dir1 = std::string(CLI_WORK_DIR) + "/sample1";
  const std::string dir2 = std::string(CLI_WORK_DIR) + "/sample2";
  const RunResult r1 =
      run("sample --builtin khatri-rao-q2 --trials 5 --seed 42 --out " + dir1);
  const RunResult r2 =
      run("sample --builtin khatri-rao-q2 --trials 5 --seed 42 --out " + dir2);
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  const std::string csv1 = slurp(dir1 + "/samples.csv");
  CHECK(!csv1.empty());
  CHECK(csv1 == slurp(dir2 + "/samples.csv"));
  CHECK(slurp(dir1 + "/summary.json") == slurp(dir2 + "/summary.json"));

  // a different seed must change the samples
  const std::string dir3 = std::string(CLI_WORK_DIR) + "/sample3";
  run("sample --builtin khatri-rao-q2 --trials 5 --seed 43 --out " + dir3);
  CHECK(csv1 != slurp(dir3 + "/samples.csv"));
}

TEST_CASE("environment seed is honored") {
  const std::string dir1 = std::string(CLI_WORK_DIR) + "/env1";
  const std::string dir2 = std::string(CLI_WORK_DIR) + "/env2";
  const std::string base = "sample --builtin khatri-rao-q2 --trials 3 --out ";
  const std::string cli = CHAOSBOUND_CLI;
  std::system(("CHAOSBOUND_SEED=9 " + cli + " " + base + dir1 + " > /dev/null 2>&1").c_str());
  std::system(("CHAOSBOUND_SEED=9 " + cli + " " + base + dir2 + " > /dev/null 2>&1").c_str());
  CHECK(slurp(dir1 + "/samples.csv") == slurp(dir2 + "/samples.csv"));
}

TEST_CASE("sampling a builtin shape routes through the graph matrix") {
  const RunResult r = run("sample --builtin wigner --n 32 --trials 3 --seed 7");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("trial,norm") != std::string::npos);
}

TEST_CASE("scaling prints the fitted slope next to the prediction") {
  const RunResult r =
      run("scaling --builtin wigner --sizes 16,32,64 --trials 3 --seed 5");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("fitted slope") != std::string::npos);
  CHECK(r.output.find("predicted exponent 0.5") != std::string::npos);

  const RunResult usage = run("scaling --builtin wigner --sizes 16,32 --trials 3");
  CHECK(usage.exit_code == 64);

  const RunResult zero = run("scaling --builtin wigner --sizes 16,32,64 --trials 0");
  CHECK(zero.exit_code == 64);
}

TEST_CASE("text output of the builtin examples is byte-stable across runs") {
  for (const std::string name :
       {"khatri-rao-q2", "tensor-pca-1", "tensor-pca-2", "ellipsoid-phi", "ellipsoid-psi"}) {
    const RunResult a = run("analyze --builtin " + name);
    const RunResult b = run("analyze --builtin " + name);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
  }
}
