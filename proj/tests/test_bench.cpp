#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "odba/bench.hpp"

using namespace odba;
using namespace odba::bench;

namespace {

json base_config(const std::string& mode) {
  return json{{"mode", mode},
              {"chain", {{"N", 2}, {"theta", "random"}, {"eta", json::array({0.45, 0.1})}}},
              {"boundary", "random"},
              {"seed", 7}};
}

}  // namespace

TEST_CASE("config parsing round trip and validation") {
  RunConfig cfg = parse_config(base_config("match"));
  CHECK(cfg.mode == Mode::kMatch);
  CHECK(cfg.num_sites == 2);
  CHECK(cfg.seed == 7);
  CHECK(cfg.random_boundary);

  CHECK_THROWS_AS(parse_mode("frobnicate"), std::invalid_argument);

  json bad = base_config("match");
  bad["chain"]["theta"] = json::array({json::array({1.0, 0.0})});
  CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);

  json open_cfg = base_config("solve-chain");
  open_cfg["boundary"] = {{"type", "open"},
                          {"xi", json::array({0.9, -0.3})},
                          {"xibar", json::array({-0.5, 0.7})},
                          {"h1", json::array({0.0, 0.0, 1.0})},
                          {"h2", json::array({0.6, 0.0, 0.8})}};
  const RunConfig oc = parse_config(open_cfg);
  CHECK(!oc.boundary_is_gaudin);
  CHECK(oc.h2(0) == 0.6);
}

TEST_CASE("verify-algebra passes end to end") {
  const RunConfig cfg = parse_config(base_config("verify-algebra"));
  const json report = run(cfg);
  CHECK(report_passed(report));
  CHECK(report["checks"].contains("qybe"));
  CHECK(report["checks"].contains("dual_reflection"));
  CHECK(report["checks"].contains("transfer_commutativity"));
  // the literal shift reading is recorded but not a gate
  CHECK(report["info"]["dual_reflection_literal_shift_residual"].get<double>() >
        1e-4);
}

TEST_CASE("build-operators passes end to end") {
  const json report = run(parse_config(base_config("build-operators")));
  CHECK(report_passed(report));
  CHECK(report["checks"]["gaudin_closed_vs_fd"]["pass"].get<bool>());
}

TEST_CASE("match covers the full two-site spectrum") {
  const json report = run(parse_config(base_config("match")));
  CHECK(report_passed(report));
  CHECK(report["matches"]["matched"].get<int>() == 4);
  CHECK(report["matches"]["total"].get<int>() == 4);
  CHECK(report["matches"]["max_rel_err"].get<double>() <= 1e-8);
}

TEST_CASE("solve-gaudin reports the roots it found") {
  const json report = run(parse_config(base_config("solve-gaudin")));
  CHECK(report_passed(report));
  CHECK(report["roots"].size() == 4);
  for (const json& r : report["roots"]) {
    CHECK(r["residual_norm"].get<double>() <= 1e-12);
  }
}

TEST_CASE("solve-chain validates against the exact transfer spectrum") {
  const json report = run(parse_config(base_config("solve-chain")));
  CHECK(report_passed(report));
  CHECK(report["checks"]["bethe_vs_exact"]["pass"].get<bool>());
  CHECK(report["checks"]["lambda_relations"]["pass"].get<bool>());
}

TEST_CASE("invalid chain data is a usage error naming the constraint") {
  json cfg = base_config("solve-gaudin");
  cfg["chain"]["theta"] =
      json::array({json::array({1.0, 0.0}), json::array({1.0, 0.0})});
  try {
    run(parse_config(cfg));
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("theta") != std::string::npos);
  }
}

TEST_CASE("identical config and seed give identical digests") {
  const RunConfig cfg = parse_config(base_config("match"));
  const json a = run(cfg);
  const json b = run(cfg);
  CHECK(report_digest(a) == report_digest(b));

  RunConfig threaded = cfg;
  threaded.solver.threads = 4;
  const json c = run(threaded);
  // thread count is not part of the digest-relevant state
  json ca = a, cc = c;
  ca.erase("timings");
  cc.erase("timings");
  CHECK(ca == cc);
}

TEST_CASE("different seeds give different draws") {
  RunConfig a = parse_config(base_config("match"));
  RunConfig b = a;
  b.seed = 8;
  CHECK(report_digest(run(a)) != report_digest(run(b)));
}

TEST_CASE("a one-point sweep reproduces a single match run") {
  json cfg = base_config("sweep");
  cfg["sweep"] = {{"parameter", "xi1"},
                  {"values", json::array({json::array({0.4, 0.1})})}};
  const json report = sweep(parse_config(cfg));
  CHECK(report_passed(report));
  REQUIRE(report["points"].size() == 1);
  CHECK(report["points"][0]["matched_fraction"].get<double>() == 1.0);
}

TEST_CASE("five-point sweep in xi1 stays fully matched") {
  json cfg = base_config("sweep");
  json values = json::array();
  for (double v : {-0.6, -0.2, 0.1, 0.5, 0.9}) {
    values.push_back(json::array({v, 0.2}));
  }
  cfg["sweep"] = {{"parameter", "xi1"}, {"values", values}};
  const json report = sweep(parse_config(cfg));
  CHECK(report_passed(report));
  for (const json& pt : report["points"]) {
    CHECK(pt["matched_fraction"].get<double>() == 1.0);
  }
}

TEST_CASE("h21 scale sweep down to zero hits the parallel branch") {
  json cfg = base_config("sweep");
  cfg["sweep"] = {{"parameter", "h21_scale"},
                  {"values", json::array({json::array({0.5, 0.0}),
                                          json::array({0.0, 0.0})})}};
  const json report = sweep(parse_config(cfg));
  CHECK(report_passed(report));
  CHECK(report["points"][1]["matched_fraction"].get<double>() == 1.0);
}

TEST_CASE("csv export writes one row per state and site") {
  RunConfig cfg = parse_config(base_config("match"));
  cfg.csv_path = "test_bench_spectrum.csv";
  const json report = run(cfg);
  CHECK(report_passed(report));
  std::ifstream in(cfg.csv_path);
  REQUIRE(in.good());
  std::string line;
  int rows = 0;
  std::getline(in, line);
  CHECK(line ==
        "state,j,E_exact_re,E_exact_im,E_bethe_re,E_bethe_im,rel_err");
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 8);  // 4 states x 2 sites
  in.close();
  std::remove(cfg.csv_path.c_str());
}
