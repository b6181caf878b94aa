// bench.hpp — batch orchestration: configuration, experiment pipelines
// (verify / build / solve / match / sweep) and machine-readable reports.

#pragma once

#include <json.hpp>

#include <random>
#include <string>

#include "odba/spectra.hpp"

namespace odba::bench {

using nlohmann::json;

enum class Mode {
  kVerifyAlgebra,
  kBuildOperators,
  kSolveChain,
  kSolveGaudin,
  kMatch,
  kSweep
};

Mode parse_mode(const std::string& name);  // invalid_argument on bad name
std::string mode_name(Mode m);

struct RunConfig {
  Mode mode = Mode::kVerifyAlgebra;

  int num_sites = 2;
  std::vector<Complex> theta;  // empty: drawn from seed
  Complex eta{0.4, 0.0};

  // exactly one boundary flavour is active; random_boundary draws the
  // flavour the mode needs
  bool random_boundary = true;
  bool boundary_is_gaudin = true;
  Complex xi{0.8, 0.0}, xi1{0.5, 0.0};  // gaudin flavour
  Vec3 h1{0, 0, 1}, h21{0.6, 0, 0}, h22{0, 0, -0.36};
  Complex xibar{-0.8, 0.0};  // open flavour
  Vec3 h2{0, 0, 1};

  SolveOptions solver;
  std::uint64_t seed = 1;
  double tol_scale = 1.0;
  std::string output_path;
  std::string csv_path;

  std::string sweep_parameter;  // xi | xi1 | h21_scale | h21_angle
  std::vector<Complex> sweep_values;
};

RunConfig parse_config(const json& j);

// Executes the pipeline for cfg.mode and returns the full report:
// {config, version, tolerances, checks, roots, spectra, matches, timings,
// pass}. Random draws are fully determined by cfg.seed.
json run(const RunConfig& cfg);

// `match` over a parameter grid, warm-starting each point from the previous
// one; per-point failures are recorded and the sweep continues.
json sweep(const RunConfig& cfg);

bool report_passed(const json& report);
// serialized report with volatile fields (timings) stripped
std::string report_digest(const json& report);

// --------------------------- deterministic draws ----------------------------

std::vector<Complex> draw_theta(int n, Complex eta, std::mt19937_64& rng);
GaudinBoundary draw_gaudin_boundary(std::mt19937_64& rng,
                                    const std::vector<Complex>& theta,
                                    double h21_scale_min = 0.3,
                                    double h21_scale_max = 0.9);
OpenBoundary draw_open_boundary(std::mt19937_64& rng);

// ------------------------------ solve pipelines -----------------------------

// Enumerates Gaudin Bethe roots and attaches energies. Generic boundaries
// use the full N-root system; the parallel branch (|h21| = 0) enumerates
// per sector M = 0..N, the limit in which N-M roots sit at infinity.
std::vector<BetheSolutionRecord> solve_gaudin_bae(
    const std::vector<Complex>& theta, const GaudinBoundary& g,
    const SolveOptions& opts, int target_count = 0);

// Chain analogue; sector split activates when c = 2(h1.h2 - 1) vanishes.
std::vector<BetheRoots> solve_chain_bae(const TQContext& ctx,
                                        const SolveOptions& opts,
                                        int target_count = 0);

// ------------------------------- serialization ------------------------------

json complex_to_json(Complex z);
Complex complex_from_json(const json& j);

}  // namespace odba::bench
