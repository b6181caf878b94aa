// odba-gaudin — batch front end for the open-boundary Gaudin/XXX toolkit.
//
//   odba-gaudin <mode> --config cfg.json [--seed S] [--out report.json]
//               [--tol-scale X]
//
// Exit status: 0 all checks passed, 1 a declared tolerance failed,
// 2 configuration/usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "odba/bench.hpp"

namespace {

int run_main(int argc, char** argv) {
  CLI::App app{"open-boundary XXX chain / Gaudin model toolkit"};
  std::string mode_name;
  std::string config_path;
  std::string out_path;
  std::int64_t seed = -1;
  double tol_scale = 0.0;

  app.add_option("mode", mode_name,
                 "verify-algebra | build-operators | solve-chain | "
                 "solve-gaudin | match | sweep")
      ->required();
  app.add_option("--config", config_path, "JSON configuration file")
      ->required();
  app.add_option("--seed", seed, "override the configured RNG seed");
  app.add_option("--out", out_path, "report output path");
  app.add_option("--tol-scale", tol_scale, "scale all tolerances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  odba::bench::RunConfig cfg;
  try {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read config file " << config_path << "\n";
      return 2;
    }
    nlohmann::json j = nlohmann::json::parse(in);
    cfg = odba::bench::parse_config(j);
    cfg.mode = odba::bench::parse_mode(mode_name);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (tol_scale > 0.0) cfg.tol_scale = tol_scale;
    if (!out_path.empty()) cfg.output_path = out_path;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  nlohmann::json report;
  try {
    report = cfg.mode == odba::bench::Mode::kSweep ? odba::bench::sweep(cfg)
                                                   : odba::bench::run(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const std::string payload = report.dump(2);
  if (!cfg.output_path.empty()) {
    std::ofstream out(cfg.output_path);
    if (!out) {
      std::cerr << "error: cannot write " << cfg.output_path << "\n";
      return 2;
    }
    out << payload << "\n";
  } else {
    std::cout << payload << "\n";
  }

  if (!odba::bench::report_passed(report)) {
    if (report.contains("checks")) {
      for (const auto& [name, check] : report["checks"].items()) {
        if (!check.value("pass", true)) {
          std::cerr << "FAILED check: " << name << "\n";
        }
      }
    }
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run_main(argc, argv); }
