// Exercises the CLI process contract: exit codes 0/2/3/1 for success,
// hypothesis violations, budget exhaustion and I/O errors, plus the
// warning-level shared-fixed-point path. argv[1] is the CLI binary, argv[2]
// the data directory.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

int g_failures = 0;

int run(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

void expect(const std::string& what, int got, int want) {
  const bool ok = got == want;
  std::printf("[%s] %s: exit %d (expected %d)\n", ok ? "ok" : "FAIL", what.c_str(), got,
              want);
  if (!ok) ++g_failures;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::printf("usage: cli_contract CLI_BINARY DATA_DIR\n");
    return 1;
  }
  const std::string cli = argv[1];
  const std::string data = argv[2];
  const auto tmp = std::filesystem::temp_directory_path() / "conformal_lab_cli_contract";
  std::filesystem::create_directories(tmp);

  const std::string expanding = (tmp / "expanding.json").string();
  std::ofstream(expanding) << R"({"maps": ["1.2*x"], "probs": [1.0]})";
  const std::string overlap = (tmp / "overlap.json").string();
  std::ofstream(overlap) << R"({"maps": ["x/2", "x/2"], "probs": [0.5, 0.5]})";
  const std::string shared_fp = (tmp / "shared_fp.json").string();
  std::ofstream(shared_fp) << R"({"maps": ["x/3", "x/2"], "probs": [0.5, 0.5]})";
  const std::string bad_syntax = (tmp / "bad_syntax.json").string();
  std::ofstream(bad_syntax) << R"({"maps": ["x/3 + y"], "probs": [1.0]})";

  expect("validate on a good system", run(cli + " validate --ifs " + data + "/cantor.json"),
         0);
  expect("validate on an expanding map", run(cli + " validate --ifs " + expanding), 2);
  expect("validate with an unknown identifier", run(cli + " validate --ifs " + bad_syntax),
         1);
  expect("validate with a shared fixed point warns but succeeds",
         run(cli + " validate --ifs " + shared_fp), 0);
  expect("separation on exact overlaps", run(cli + " separation --ifs " + overlap +
                                             " --nmax 2"),
         2);
  expect("budget exhaustion", run(cli + " dim --ifs " + data +
                                  "/cantor.json --nmax 16 --budget 100"),
         3);
  expect("environment budget override",
         run("CONFORMAL_LAB_BUDGET=100 " + cli + " dim --ifs " + data +
             "/cantor.json --nmax 16"),
         3);
  expect("missing input file", run(cli + " validate --ifs " + (tmp / "nope.json").string()),
         1);
  expect("experiment with a violated hypothesis",
         run(cli + " experiment --ifs " + data +
             "/cantor.json --name entropy-increase --params nu=dirac"),
         2);
  expect("experiment with unknown name", run(cli + " experiment --ifs " + data +
                                             "/cantor.json --name nonsense"),
         1);

  if (g_failures == 0) {
    std::printf("cli contract: all checks passed\n");
    return 0;
  }
  std::printf("cli contract: %d check(s) failed\n", g_failures);
  return 1;
}
