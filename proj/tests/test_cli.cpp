// Drives the installed CLI binary end to end through a shell.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ODBA_CLI_PATH) + " " + args +
                          " > cli_stdout.txt 2> cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_config(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  out << j.dump(2);
}

}  // namespace

TEST_CASE("match mode exits 0 and writes a passing report") {
  nlohmann::json cfg = {
      {"chain", {{"N", 2}, {"theta", "random"}, {"eta", 0.45}}},
      {"boundary", "random"},
      {"seed", 7}};
  write_config("cli_match.json", cfg);
  const int rc =
      run_cli("match --config cli_match.json --out cli_match_report.json");
  CHECK(rc == 0);
  std::ifstream in("cli_match_report.json");
  REQUIRE(in.good());
  const nlohmann::json report = nlohmann::json::parse(in);
  CHECK(report["pass"].get<bool>());
  CHECK(report["matches"]["matched"].get<int>() == 4);
  CHECK(report["version"].is_string());
}

TEST_CASE("seed override changes the report") {
  nlohmann::json cfg = {
      {"chain", {{"N", 1}, {"theta", "random"}, {"eta", 0.4}}},
      {"boundary", "random"},
      {"seed", 3}};
  write_config("cli_seed.json", cfg);
  CHECK(run_cli("solve-gaudin --config cli_seed.json --out cli_a.json") == 0);
  CHECK(run_cli("solve-gaudin --config cli_seed.json --seed 4 --out "
                "cli_b.json") == 0);
  std::ifstream a("cli_a.json"), b("cli_b.json");
  nlohmann::json ja = nlohmann::json::parse(a);
  nlohmann::json jb = nlohmann::json::parse(b);
  CHECK(ja["config"]["seed"].get<int>() == 3);
  CHECK(jb["config"]["seed"].get<int>() == 4);
  CHECK(ja["roots"] != jb["roots"]);
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(run_cli("match") == 2);                      // missing --config
  CHECK(run_cli("match --config does_not_exist.json") == 2);
  nlohmann::json cfg = {
      {"chain",
       {{"N", 2},
        {"theta", nlohmann::json::array(
                      {nlohmann::json::array({1.0, 0.0}),
                       nlohmann::json::array({1.0, 0.0})})},
        {"eta", 0.45}}},
      {"boundary", "random"},
      {"seed", 7}};
  write_config("cli_bad.json", cfg);
  CHECK(run_cli("solve-gaudin --config cli_bad.json") == 2);
  CHECK(run_cli("frobnicate --config cli_bad.json") == 2);
}

TEST_CASE("ODBA_THREADS caps workers without changing results") {
  nlohmann::json cfg = {
      {"chain", {{"N", 2}, {"theta", "random"}, {"eta", 0.45}}},
      {"boundary", "random"},
      {"seed", 7}};
  write_config("cli_threads.json", cfg);
  CHECK(run_cli("match --config cli_threads.json --out cli_t1.json") == 0);
  setenv("ODBA_THREADS", "3", 1);
  const int rc =
      run_cli("match --config cli_threads.json --out cli_t3.json");
  unsetenv("ODBA_THREADS");
  CHECK(rc == 0);
  std::ifstream a("cli_t1.json"), b("cli_t3.json");
  nlohmann::json ja = nlohmann::json::parse(a);
  nlohmann::json jb = nlohmann::json::parse(b);
  ja.erase("timings");
  jb.erase("timings");
  CHECK(ja == jb);
}

TEST_CASE("sweep mode produces per-point records") {
  nlohmann::json cfg = {
      {"chain", {{"N", 2}, {"theta", "random"}, {"eta", 0.4}}},
      {"boundary", "random"},
      {"seed", 11},
      {"sweep",
       {{"parameter", "xi1"},
        {"values", nlohmann::json::array({nlohmann::json::array({0.2, 0.0}),
                                          nlohmann::json::array({0.6, 0.0})})}}}};
  write_config("cli_sweep.json", cfg);
  CHECK(run_cli("sweep --config cli_sweep.json --out cli_sweep_report.json") ==
        0);
  std::ifstream in("cli_sweep_report.json");
  REQUIRE(in.good());
  const nlohmann::json report = nlohmann::json::parse(in);
  CHECK(report["points"].size() == 2);
}
