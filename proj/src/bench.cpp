#include "odba/bench.hpp"

#include <Eigen/Geometry>

#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>

#include "odba/version.hpp"

namespace odba::bench {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Complex cgauss(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return Complex(re, im);
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(g(rng), g(rng), g(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

json vec3_to_json(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument("config: expected a 3-vector");
  }
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

struct CheckTable {
  json checks = json::object();
  json tolerances = json::object();
  bool all_pass = true;

  void add(const std::string& name, double residual, double tol) {
    const bool ok = residual <= tol;
    checks[name] = {{"residual", residual}, {"tolerance", tol}, {"pass", ok}};
    tolerances[name] = tol;
    all_pass = all_pass && ok;
  }
  void add_count(const std::string& name, int found, int expected) {
    const bool ok = found == expected;
    checks[name] = {{"found", found}, {"expected", expected}, {"pass", ok}};
    all_pass = all_pass && ok;
  }
};

json roots_to_json(const BetheRoots& r) {
  json lam = json::array();
  for (const Complex& l : r.lambda) lam.push_back(complex_to_json(l));
  return json{{"lambda", lam},
              {"mode", r.mode == RootMode::kChain ? "chain" : "gaudin"},
              {"residual_norm", r.residual_norm},
              {"sector", static_cast<int>(r.lambda.size())}};
}

json tuple_to_json(const Eigen::VectorXcd& t) {
  json out = json::array();
  for (Eigen::Index j = 0; j < t.size(); ++j) {
    out.push_back(complex_to_json(t(j)));
  }
  return out;
}

}  // namespace

// ------------------------------- serialization ------------------------------

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  throw std::invalid_argument("config: expected complex as number or [re,im]");
}

Mode parse_mode(const std::string& name) {
  if (name == "verify-algebra") return Mode::kVerifyAlgebra;
  if (name == "build-operators") return Mode::kBuildOperators;
  if (name == "solve-chain") return Mode::kSolveChain;
  if (name == "solve-gaudin") return Mode::kSolveGaudin;
  if (name == "match") return Mode::kMatch;
  if (name == "sweep") return Mode::kSweep;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::kVerifyAlgebra: return "verify-algebra";
    case Mode::kBuildOperators: return "build-operators";
    case Mode::kSolveChain: return "solve-chain";
    case Mode::kSolveGaudin: return "solve-gaudin";
    case Mode::kMatch: return "match";
    case Mode::kSweep: return "sweep";
  }
  return "?";
}

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  if (j.contains("mode")) cfg.mode = parse_mode(j.at("mode").get<std::string>());
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("tol_scale")) cfg.tol_scale = j.at("tol_scale").get<double>();
  if (j.contains("output_path")) {
    cfg.output_path = j.at("output_path").get<std::string>();
  }
  if (j.contains("csv_path")) cfg.csv_path = j.at("csv_path").get<std::string>();

  if (j.contains("chain")) {
    const json& c = j.at("chain");
    cfg.num_sites = c.at("N").get<int>();
    if (c.contains("eta")) cfg.eta = complex_from_json(c.at("eta"));
    if (c.contains("theta") && !c.at("theta").is_string()) {
      for (const json& t : c.at("theta")) {
        cfg.theta.push_back(complex_from_json(t));
      }
      if (static_cast<int>(cfg.theta.size()) != cfg.num_sites) {
        throw std::invalid_argument("config: theta length != N");
      }
    }
  }

  if (j.contains("boundary")) {
    const json& b = j.at("boundary");
    if (b.is_string()) {
      if (b.get<std::string>() != "random") {
        throw std::invalid_argument("config: boundary must be an object or 'random'");
      }
      cfg.random_boundary = true;
    } else {
      cfg.random_boundary = false;
      const std::string type = b.value("type", "gaudin");
      if (type == "gaudin") {
        cfg.boundary_is_gaudin = true;
        cfg.xi = complex_from_json(b.at("xi"));
        cfg.xi1 = complex_from_json(b.at("xi1"));
        cfg.h1 = vec3_from_json(b.at("h1"));
        cfg.h21 = vec3_from_json(b.at("h21"));
        cfg.h22 = b.contains("h22") ? vec3_from_json(b.at("h22"))
                                    : Vec3(-cfg.h21.squaredNorm() * cfg.h1);
      } else if (type == "open") {
        cfg.boundary_is_gaudin = false;
        cfg.xi = complex_from_json(b.at("xi"));
        cfg.xibar = complex_from_json(b.at("xibar"));
        cfg.h1 = vec3_from_json(b.at("h1"));
        cfg.h2 = vec3_from_json(b.at("h2"));
      } else {
        throw std::invalid_argument("config: boundary type must be gaudin|open");
      }
    }
  }

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    if (s.contains("max_iter")) cfg.solver.max_iter = s.at("max_iter").get<int>();
    if (s.contains("starts")) cfg.solver.starts = s.at("starts").get<int>();
    if (s.contains("residual_tol")) {
      cfg.solver.residual_tol = s.at("residual_tol").get<double>();
    }
    if (s.contains("step_tol")) cfg.solver.step_tol = s.at("step_tol").get<double>();
    if (s.contains("dedup_tol")) cfg.solver.dedup_tol = s.at("dedup_tol").get<double>();
    if (s.contains("box")) cfg.solver.box = s.at("box").get<double>();
    if (s.contains("threads")) cfg.solver.threads = s.at("threads").get<int>();
    if (s.contains("seed")) cfg.solver.seed = s.at("seed").get<std::uint64_t>();
  }

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    cfg.sweep_parameter = s.at("parameter").get<std::string>();
    for (const json& v : s.at("values")) {
      cfg.sweep_values.push_back(complex_from_json(v));
    }
  }
  return cfg;
}

// --------------------------- deterministic draws ----------------------------

std::vector<Complex> draw_theta(int n, Complex eta, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<Complex> theta;
    theta.reserve(n);
    for (int k = 0; k < n; ++k) {
      const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
      theta.emplace_back(sign * (0.5 + unit(rng)), unit(rng) - 0.5);
    }
    try {
      ChainSpec probe(n, theta, eta, 1e-3);
      return theta;
    } catch (const std::invalid_argument&) {
    }
  }
  throw std::runtime_error("draw_theta: could not draw a valid configuration");
}

GaudinBoundary draw_gaudin_boundary(std::mt19937_64& rng,
                                    const std::vector<Complex>& theta,
                                    double h21_scale_min,
                                    double h21_scale_max) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vec3 h1 = random_unit(rng);
  Vec3 w;
  do {
    w = random_unit(rng);
    w -= w.dot(h1) * h1;
  } while (w.norm() < 1e-3);
  w.normalize();
  const double scale =
      h21_scale_min + (h21_scale_max - h21_scale_min) * unit(rng);
  const Vec3 h21 = scale * w;

  Complex xi;
  for (int attempt = 0;; ++attempt) {
    xi = cgauss(rng);
    bool ok = std::abs(xi) > 0.1;
    for (const Complex& t : theta) {
      ok = ok && std::abs(t - xi) > 0.05 && std::abs(t + xi) > 0.05;
    }
    if (ok) break;
    if (attempt > 100) {
      throw std::runtime_error("draw_gaudin_boundary: xi draw failed");
    }
  }
  const Complex xi1 = cgauss(rng);
  return GaudinBoundary(xi, xi1, h1, h21);
}

OpenBoundary draw_open_boundary(std::mt19937_64& rng) {
  return OpenBoundary(cgauss(rng), cgauss(rng), random_unit(rng),
                      random_unit(rng));
}

// ------------------------------ solve pipelines -----------------------------

std::vector<BetheSolutionRecord> solve_gaudin_bae(
    const std::vector<Complex>& theta, const GaudinBoundary& g,
    const SolveOptions& opts, int target_count) {
  const int n = static_cast<int>(theta.size());
  const bool parallel_branch = g.h21.squaredNorm() < 1e-12;

  std::vector<BetheRoots> all;
  if (!parallel_branch) {
    BaeProblem p = make_gaudin_problem(g, theta, n);
    all = enumerate_roots(p, opts, target_count);
    if (target_count > 0 && static_cast<int>(all.size()) < target_count) {
      SolveOptions wide = opts;
      wide.starts = (opts.starts > 0 ? opts.starts : 64 * (1 << n)) * 4;
      wide.seed = opts.seed + 1;
      all = enumerate_roots(p, wide, target_count);
    }
  } else {
    // homogeneous branch: N-M roots at infinity, enumerate per sector
    for (int m = 0; m <= n; ++m) {
      BaeProblem p = make_gaudin_problem(g, theta, m);
      std::vector<BetheRoots> part = enumerate_roots(p, opts);
      all.insert(all.end(), part.begin(), part.end());
    }
  }

  std::vector<BetheSolutionRecord> out;
  out.reserve(all.size());
  for (BetheRoots& r : all) {
    BetheSolutionRecord rec;
    rec.energies.resize(n);
    for (int j = 1; j <= n; ++j) {
      rec.energies(j - 1) = gaudin_energy(j, r, g, theta);
    }
    rec.roots = std::move(r);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<BetheRoots> solve_chain_bae(const TQContext& ctx,
                                        const SolveOptions& opts,
                                        int target_count) {
  const int n = ctx.spec.num_sites;
  const bool parallel_branch = std::abs(ctx.c()) < 1e-12;
  std::vector<BetheRoots> all;
  if (!parallel_branch) {
    BaeProblem p = make_chain_problem(ctx, n);
    all = enumerate_roots(p, opts, target_count);
    if (target_count > 0 && static_cast<int>(all.size()) < target_count) {
      SolveOptions wide = opts;
      wide.starts = (opts.starts > 0 ? opts.starts : 64 * (1 << n)) * 4;
      wide.seed = opts.seed + 1;
      all = enumerate_roots(p, wide, target_count);
    }
  } else {
    for (int m = 0; m <= n; ++m) {
      BaeProblem p = make_chain_problem(ctx, m);
      std::vector<BetheRoots> part = enumerate_roots(p, opts);
      all.insert(all.end(), part.begin(), part.end());
    }
  }
  return all;
}

// --------------------------------- pipelines --------------------------------

namespace {

// resolved problem instance for one run
struct Instance {
  std::vector<Complex> theta;
  Complex eta;
  bool has_gaudin = false;
  std::optional<GaudinBoundary> gaudin;
  std::optional<OpenBoundary> open;
};

Instance resolve_instance(const RunConfig& cfg, std::mt19937_64& rng) {
  Instance inst;
  inst.eta = cfg.eta;
  const bool gaudin_mode = cfg.mode == Mode::kBuildOperators ||
                           cfg.mode == Mode::kSolveGaudin ||
                           cfg.mode == Mode::kMatch || cfg.mode == Mode::kSweep;
  const Complex eta_for_validation = gaudin_mode ? Complex(0, 0) : cfg.eta;
  inst.theta = cfg.theta.empty()
                   ? draw_theta(cfg.num_sites, eta_for_validation, rng)
                   : cfg.theta;
  ChainSpec probe(cfg.num_sites, inst.theta, eta_for_validation);  // validate

  if (cfg.random_boundary) {
    if (gaudin_mode) {
      inst.gaudin = draw_gaudin_boundary(rng, inst.theta);
      inst.has_gaudin = true;
    } else {
      inst.open = draw_open_boundary(rng);
    }
  } else if (cfg.boundary_is_gaudin) {
    inst.gaudin = GaudinBoundary(cfg.xi, cfg.xi1, cfg.h1, cfg.h21, cfg.h22);
    inst.has_gaudin = true;
  } else {
    inst.open = OpenBoundary(cfg.xi, cfg.xibar, cfg.h1, cfg.h2);
  }
  // chain modes driven by gaudin data use the expansion at finite eta
  if (!gaudin_mode && inst.has_gaudin && !inst.open) {
    inst.open = boundary_at_eta(*inst.gaudin, inst.eta);
  }
  return inst;
}

json echo_config(const RunConfig& cfg, const Instance& inst) {
  json chain = {{"N", cfg.num_sites}, {"eta", complex_to_json(inst.eta)}};
  json th = json::array();
  for (const Complex& t : inst.theta) th.push_back(complex_to_json(t));
  chain["theta"] = th;

  json boundary;
  if (inst.has_gaudin) {
    const GaudinBoundary& g = *inst.gaudin;
    boundary = {{"type", "gaudin"},
                {"xi", complex_to_json(g.xi)},
                {"xi1", complex_to_json(g.xi1)},
                {"h1", vec3_to_json(g.h1)},
                {"h21", vec3_to_json(g.h21)},
                {"h22", vec3_to_json(g.h22)}};
  } else {
    const OpenBoundary& b = *inst.open;
    boundary = {{"type", "open"},
                {"xi", complex_to_json(b.xi)},
                {"xibar", complex_to_json(b.xibar)},
                {"h1", vec3_to_json(b.h1)},
                {"h2", vec3_to_json(b.h2)}};
  }
  return json{{"mode", mode_name(cfg.mode)},
              {"chain", chain},
              {"boundary", boundary},
              {"seed", cfg.seed},
              {"tol_scale", cfg.tol_scale},
              {"solver",
               {{"max_iter", cfg.solver.max_iter},
                {"starts", cfg.solver.starts},
                {"residual_tol", cfg.solver.residual_tol},
                {"dedup_tol", cfg.solver.dedup_tol},
                {"box", cfg.solver.box},
                {"seed", cfg.solver.seed}}}};
}

void run_verify_algebra(const RunConfig& cfg, const Instance& inst,
                        std::mt19937_64& rng, CheckTable& table,
                        json& report) {
  const double ts = cfg.tol_scale;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto rnd_eta = [&] { return Complex(0.3 + 0.4 * unit(rng), 0.3 * (unit(rng) - 0.5)); };

  double worst_qybe = 0, worst_unit = 0, worst_cross = 0, worst_anti = 0,
         worst_qc = 0, worst_re = 0, worst_dre = 0;
  double literal_dre = 0;
  for (int k = 0; k < 100; ++k) {
    const Complex eta = rnd_eta();
    const Complex pts[3] = {cgauss(rng), cgauss(rng), cgauss(rng)};
    worst_qybe = std::max(worst_qybe,
                          check_r_identity(RIdentity::kQybe, {pts, 3}, eta));
    worst_unit = std::max(
        worst_unit, check_r_identity(RIdentity::kUnitarity, {pts, 1}, eta));
    worst_cross = std::max(
        worst_cross, check_r_identity(RIdentity::kCrossing, {pts, 1}, eta));
    worst_anti = std::max(
        worst_anti, check_r_identity(RIdentity::kAntisymmetry, {}, eta));
    worst_qc = std::max(worst_qc, check_r_identity(RIdentity::kQuasiClassical,
                                                   {pts, 1}, eta));
    const OpenBoundary b = draw_open_boundary(rng);
    worst_re = std::max(worst_re,
                        check_reflection(ReflectionKind::kReflection, pts[0],
                                         pts[1], eta, b));
    worst_dre = std::max(worst_dre,
                         check_reflection(ReflectionKind::kDualReflection,
                                          pts[0], pts[1], eta, b));
    literal_dre = std::max(
        literal_dre,
        check_reflection(ReflectionKind::kDualReflection, pts[0], pts[1], eta,
                         b, DualShift::kLiteralTwo));
  }
  table.add("qybe", worst_qybe, 1e-12 * ts);
  table.add("unitarity", worst_unit, 1e-12 * ts);
  table.add("crossing", worst_cross, 1e-12 * ts);
  table.add("antisymmetry", worst_anti, 1e-12 * ts);
  table.add("quasi_classical", worst_qc, 1e-12 * ts);
  table.add("reflection", worst_re, 1e-12 * ts);
  table.add("dual_reflection", worst_dre, 1e-12 * ts);
  report["info"]["dual_reflection_literal_shift_residual"] = literal_dre;

  const ChainSpec spec(cfg.num_sites, inst.theta, inst.eta);
  const OpenBoundary& b = *inst.open;
  double worst_comm = 0;
  for (int k = 0; k < 20; ++k) {
    const Op tu = transfer_matrix(cgauss(rng), spec, b);
    const Op tv = transfer_matrix(cgauss(rng), spec, b);
    worst_comm = std::max(worst_comm, commutator_residual(tu, tv));
  }
  table.add("transfer_commutativity", worst_comm, 1e-10 * ts);

  Complex init = 2.0 * b.xi * b.xibar;
  for (const Complex& t : spec.theta) init *= (inst.eta - t) * (inst.eta + t);
  const Op tau0 = transfer_matrix(Complex(0, 0), spec, b);
  const Op expected = init * Op::Identity(spec.dim(), spec.dim());
  table.add("transfer_initial_value", rel_residual(tau0, expected), 1e-10 * ts);

  double worst_opx = 0;
  for (int k = 0; k < 10; ++k) {
    const Complex u = cgauss(rng);
    worst_opx = std::max(worst_opx,
                         rel_residual(transfer_matrix(-u - inst.eta, spec, b),
                                      transfer_matrix(u, spec, b)));
  }
  table.add("transfer_crossing", worst_opx, 1e-10 * ts);

  const std::vector<Complex> pts = transfer_sample_points(spec);
  const std::vector<Op> taus = sample_transfer(spec, b, pts);
  const CommonEigenbasis basis = common_eigenbasis(taus, cfg.seed ^ 0x51ed);
  const std::vector<LambdaPoly> polys =
      lambda_polys_from_transfer(spec, b, basis, pts);
  double worst_fit = 0.0;
  for (const LambdaPoly& lp : polys) {
    std::vector<std::pair<Complex, Complex>> samples;
    for (size_t k = 0; k < pts.size(); ++k) {
      samples.emplace_back(pts[k], basis.diagonals[k](lp.state_index));
    }
    worst_fit = std::max(worst_fit, poly_interp(samples, lp.poly.degree()).max_mismatch);
  }
  table.add("transfer_degree_fit", worst_fit, 1e-9 * ts);
}

void run_build_operators(const RunConfig& cfg, const Instance& inst,
                         std::mt19937_64& rng, CheckTable& table,
                         json& report) {
  const double ts = cfg.tol_scale;
  const ChainSpec spec(cfg.num_sites, inst.theta, Complex(0, 0));
  const GaudinBoundary& g = *inst.gaudin;
  const int n = spec.num_sites;

  std::vector<Op> hams;
  for (int j = 1; j <= n; ++j) hams.push_back(hamiltonian(j, spec, g));

  double worst_comm = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      worst_comm = std::max(worst_comm, commutator_residual(hams[i], hams[j]));
    }
  }
  table.add("gaudin_commutativity", worst_comm, 1e-10 * ts);

  double worst_fd = 0;
  json fd_estimates = json::array();
  for (int j = 1; j <= n; ++j) {
    const FdResult fd = hamiltonian_fd(j, spec, g);
    worst_fd = std::max(worst_fd, rel_residual(fd.op, hams[j - 1]));
    fd_estimates.push_back(fd.error_estimate);
  }
  table.add("gaudin_closed_vs_fd", worst_fd, 1e-6 * ts);
  report["operators"]["fd_error_estimates"] = fd_estimates;

  // alternate completion with components along h21 and h1 x h21
  double worst_h22 = 0;
  if (g.h21.norm() > 1e-12) {
    const Vec3 t1 = g.h21.normalized();
    const Vec3 t2 = g.h1.cross(t1);
    const Vec3 alt = Vec3(-g.h21.squaredNorm() * g.h1) + 0.9 * t1 + 1.1 * t2;
    const GaudinBoundary g_alt(g.xi, g.xi1, g.h1, g.h21, alt);
    for (int j = 1; j <= n; ++j) {
      const FdResult a = hamiltonian_fd(j, spec, g);
      const FdResult c = hamiltonian_fd(j, spec, g_alt);
      worst_h22 = std::max(worst_h22, rel_residual(a.op, c.op));
    }
  }
  table.add("gaudin_h22_insensitivity", worst_h22, 1e-6 * ts);

  const OpenBoundary limit = boundary_at_eta(g, Complex(0, 0));
  double worst_kk = 0;
  for (int k = 0; k < 10; ++k) {
    const Complex u = cgauss(rng);
    const Eigen::Matrix2cd kk =
        k_plus(u, limit, Complex(0, 0)) * k_minus(u, limit);
    const Eigen::Matrix2cd expect =
        (u * u - g.xi * g.xi) * Eigen::Matrix2cd::Identity();
    worst_kk = std::max(worst_kk, (kk - expect).norm() /
                                      std::max(expect.norm(), 1e-300));
  }
  table.add("boundary_product_limit", worst_kk, 1e-10 * ts);
}

// shared by solve-gaudin / match / sweep
struct GaudinPipeline {
  std::vector<BetheSolutionRecord> solutions;
  std::vector<Eigen::VectorXcd> exact;
  SpectrumReport match;
  double worst_bae = 0.0;
};

GaudinPipeline run_gaudin_pipeline(const RunConfig& cfg,
                                   const std::vector<Complex>& theta,
                                   const GaudinBoundary& g, double match_tol) {
  GaudinPipeline out;
  const int n = static_cast<int>(theta.size());
  SolveOptions opts = cfg.solver;
  if (opts.seed == 1) opts.seed = cfg.seed;
  out.solutions = solve_gaudin_bae(theta, g, opts, 1 << n);
  for (const auto& rec : out.solutions) {
    const std::vector<Complex> res = gaudin_bae_residual(rec.roots, g, theta);
    for (const Complex& r : res) {
      out.worst_bae = std::max(out.worst_bae, std::abs(r));
    }
  }
  const ChainSpec spec(n, theta, Complex(0, 0));
  out.exact = gaudin_exact_spectrum(spec, g, cfg.seed ^ 0xed5ca1e);
  out.match = match_spectra(out.solutions, out.exact, match_tol);
  return out;
}

void emit_gaudin_payload(const GaudinPipeline& pipe, json& report) {
  json roots = json::array();
  for (const auto& rec : pipe.solutions) {
    json r = roots_to_json(rec.roots);
    r["energies"] = tuple_to_json(rec.energies);
    roots.push_back(std::move(r));
  }
  report["roots"] = roots;

  json exact = json::array();
  for (const auto& t : pipe.exact) exact.push_back(tuple_to_json(t));
  report["spectra"]["exact"] = exact;

  json matches = json::array();
  for (const MatchedState& st : pipe.match.states) {
    matches.push_back(json{{"exact_index", st.exact_index},
                           {"bethe_index", st.bethe_index},
                           {"rel_err", st.rel_err},
                           {"bae_residual", st.bae_residual}});
  }
  report["matches"] = {{"states", matches},
                       {"matched", pipe.match.matched_count},
                       {"total", pipe.match.total_states},
                       {"max_rel_err", pipe.match.max_err},
                       {"unmatched_bethe", pipe.match.unmatched_bethe}};
}

void write_match_csv(const std::string& path, const GaudinPipeline& pipe) {
  std::ofstream csv(path);
  if (!csv) throw std::runtime_error("cannot open csv path " + path);
  csv << "state,j,E_exact_re,E_exact_im,E_bethe_re,E_bethe_im,rel_err\n";
  for (const MatchedState& st : pipe.match.states) {
    for (Eigen::Index j = 0; j < st.exact_energies.size(); ++j) {
      const Complex ex = st.exact_energies(j);
      Complex be(std::nan(""), std::nan(""));
      if (st.bethe_index >= 0) {
        be = pipe.solutions[st.bethe_index].energies(j);
      }
      csv << st.exact_index << ',' << j + 1 << ',' << ex.real() << ','
          << ex.imag() << ',' << be.real() << ',' << be.imag() << ','
          << st.rel_err << '\n';
    }
  }
}

void run_solve_gaudin(const RunConfig& cfg, const Instance& inst,
                      CheckTable& table, json& report) {
  const double ts = cfg.tol_scale;
  GaudinPipeline pipe = run_gaudin_pipeline(cfg, inst.theta, *inst.gaudin,
                                            1e-8 * ts);
  emit_gaudin_payload(pipe, report);
  table.add("bae_residuals", pipe.worst_bae, cfg.solver.residual_tol * ts);
  table.add_count("solution_count", static_cast<int>(pipe.solutions.size()),
                  1 << static_cast<int>(inst.theta.size()));
}

void run_match(const RunConfig& cfg, const Instance& inst, CheckTable& table,
               json& report) {
  const double ts = cfg.tol_scale;
  GaudinPipeline pipe = run_gaudin_pipeline(cfg, inst.theta, *inst.gaudin,
                                            1e-8 * ts);
  emit_gaudin_payload(pipe, report);
  table.add("bae_residuals", pipe.worst_bae, cfg.solver.residual_tol * ts);
  table.add("spectrum_match_error", pipe.match.max_err, 1e-8 * ts);
  table.add_count("matched_states", pipe.match.matched_count,
                  pipe.match.total_states);
  if (!cfg.csv_path.empty()) write_match_csv(cfg.csv_path, pipe);
}

void run_solve_chain(const RunConfig& cfg, const Instance& inst,
                     std::mt19937_64& rng, CheckTable& table, json& report) {
  const double ts = cfg.tol_scale;
  const ChainSpec spec(cfg.num_sites, inst.theta, inst.eta);
  const OpenBoundary& b = *inst.open;
  const TQContext ctx(spec, b);
  const int n = spec.num_sites;

  SolveOptions opts = cfg.solver;
  if (opts.seed == 1) opts.seed = cfg.seed;
  std::vector<BetheRoots> sols = solve_chain_bae(ctx, opts, 1 << n);

  double worst_bae = 0;
  json roots = json::array();
  for (const BetheRoots& r : sols) {
    for (const Complex& c : chain_bae_residual(r, ctx)) {
      worst_bae = std::max(worst_bae, std::abs(c));
    }
    roots.push_back(roots_to_json(r));
  }
  report["roots"] = roots;
  table.add("bae_residuals", worst_bae, cfg.solver.residual_tol * ts);
  table.add_count("solution_count", static_cast<int>(sols.size()), 1 << n);

  // eigenvalue polynomials from the T-Q form, checked against the
  // functional relations
  const std::vector<Complex> pts = transfer_sample_points(spec);
  double worst_rel = 0;
  for (const BetheRoots& r : sols) {
    std::vector<std::pair<Complex, Complex>> samples;
    for (const Complex& u : pts) {
      samples.emplace_back(u, lambda_eval(u, r, ctx));
    }
    LambdaPoly lp;
    lp.state_index = -1;
    lp.poly = poly_interp(samples, 2 * n + 2).poly;
    lp.source = LambdaSource::kTqRelation;
    const LambdaRelationResiduals rr = lambda_relations_residuals(lp, spec, b);
    for (double f : rr.functional) worst_rel = std::max(worst_rel, f);
    worst_rel = std::max({worst_rel, rr.crossing, rr.initial, rr.asymptotic,
                          rr.degree});
  }
  table.add("lambda_relations", worst_rel, 1e-9 * ts);

  // exact transfer-matrix eigenvalues at 5 generic points
  std::vector<Complex> probe;
  for (int k = 0; k < 5; ++k) probe.push_back(cgauss(rng));
  const std::vector<Op> taus = sample_transfer(spec, b, probe);
  const CommonEigenbasis basis = common_eigenbasis(taus, cfg.seed ^ 0xbe7e);
  std::vector<Eigen::VectorXcd> exact(spec.dim(), Eigen::VectorXcd(5));
  for (Eigen::Index s = 0; s < spec.dim(); ++s) {
    for (int k = 0; k < 5; ++k) exact[s](k) = basis.diagonals[k](s);
  }
  std::vector<BetheSolutionRecord> bethe;
  for (const BetheRoots& r : sols) {
    BetheSolutionRecord rec;
    rec.roots = r;
    rec.energies.resize(5);
    for (int k = 0; k < 5; ++k) rec.energies(k) = lambda_eval(probe[k], r, ctx);
    bethe.push_back(std::move(rec));
  }
  const SpectrumReport match = match_spectra(bethe, exact, 1e-8 * ts);
  table.add("bethe_vs_exact", match.max_err, 1e-8 * ts);
  table.add_count("matched_states", match.matched_count, match.total_states);
  report["matches"] = {{"matched", match.matched_count},
                       {"total", match.total_states},
                       {"max_rel_err", match.max_err}};
}

}  // namespace

json run(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(cfg.seed);
  const Instance inst = resolve_instance(cfg, rng);

  json report;
  report["config"] = echo_config(cfg, inst);
  report["version"] = ODBA_VERSION;

  CheckTable table;
  switch (cfg.mode) {
    case Mode::kVerifyAlgebra:
      run_verify_algebra(cfg, inst, rng, table, report);
      break;
    case Mode::kBuildOperators:
      run_build_operators(cfg, inst, rng, table, report);
      break;
    case Mode::kSolveGaudin:
      run_solve_gaudin(cfg, inst, table, report);
      break;
    case Mode::kMatch:
      run_match(cfg, inst, table, report);
      break;
    case Mode::kSolveChain:
      run_solve_chain(cfg, inst, rng, table, report);
      break;
    case Mode::kSweep:
      throw std::invalid_argument("run: use sweep() for sweep mode");
  }
  report["checks"] = table.checks;
  report["tolerances"] = table.tolerances;
  report["pass"] = table.all_pass;
  report["timings"] = {{"total_ms", ms_since(t0)}};
  return report;
}

json sweep(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  if (cfg.sweep_values.empty()) {
    throw std::invalid_argument("sweep: no grid values");
  }
  std::mt19937_64 rng(cfg.seed);
  const Instance inst = resolve_instance(cfg, rng);
  const GaudinBoundary& base = *inst.gaudin;

  json report;
  report["config"] = echo_config(cfg, inst);
  report["config"]["sweep"] = {{"parameter", cfg.sweep_parameter}};
  json vals = json::array();
  for (const Complex& v : cfg.sweep_values) vals.push_back(complex_to_json(v));
  report["config"]["sweep"]["values"] = vals;
  report["version"] = ODBA_VERSION;

  bool all_pass = true;
  json points = json::array();
  std::vector<Eigen::VectorXcd> warm;

  for (size_t k = 0; k < cfg.sweep_values.size(); ++k) {
    const Complex v = cfg.sweep_values[k];
    json pt;
    pt["value"] = complex_to_json(v);
    try {
      GaudinBoundary g = base;
      if (cfg.sweep_parameter == "xi") {
        g = GaudinBoundary(v, base.xi1, base.h1, base.h21);
      } else if (cfg.sweep_parameter == "xi1") {
        g = GaudinBoundary(base.xi, v, base.h1, base.h21);
      } else if (cfg.sweep_parameter == "h21_scale") {
        Vec3 dir = base.h21;
        if (dir.norm() < 1e-12) {
          dir = base.h1.unitOrthogonal();
        } else {
          dir.normalize();
        }
        g = GaudinBoundary(base.xi, base.xi1, base.h1, Vec3(v.real() * dir));
      } else if (cfg.sweep_parameter == "h21_angle") {
        const Eigen::AngleAxisd rot(v.real(), base.h1);
        g = GaudinBoundary(base.xi, base.xi1, base.h1, Vec3(rot * base.h21));
      } else {
        throw std::invalid_argument("sweep: unknown parameter '" +
                                    cfg.sweep_parameter + "'");
      }

      RunConfig point_cfg = cfg;
      point_cfg.solver.seed = cfg.solver.seed == 1 ? cfg.seed + k : cfg.solver.seed + k;

      const int n = static_cast<int>(inst.theta.size());
      SolveOptions opts = point_cfg.solver;
      const bool parallel_branch = g.h21.squaredNorm() < 1e-12;
      std::vector<BetheSolutionRecord> sols;
      if (!parallel_branch && !warm.empty()) {
        BaeProblem p = make_gaudin_problem(g, inst.theta, n);
        std::vector<BetheRoots> rs = enumerate_roots(p, opts, 1 << n, warm);
        if (static_cast<int>(rs.size()) < (1 << n)) {
          sols = solve_gaudin_bae(inst.theta, g, opts, 1 << n);
        } else {
          for (BetheRoots& r : rs) {
            BetheSolutionRecord rec;
            rec.energies.resize(n);
            for (int j = 1; j <= n; ++j) {
              rec.energies(j - 1) = gaudin_energy(j, r, g, inst.theta);
            }
            rec.roots = std::move(r);
            sols.push_back(std::move(rec));
          }
        }
      } else {
        sols = solve_gaudin_bae(inst.theta, g, opts, 1 << n);
      }

      const ChainSpec spec(n, inst.theta, Complex(0, 0));
      const std::vector<Eigen::VectorXcd> exact =
          gaudin_exact_spectrum(spec, g, cfg.seed ^ 0xed5ca1e);
      const SpectrumReport match =
          match_spectra(sols, exact, 1e-8 * cfg.tol_scale);

      warm.clear();
      for (const auto& rec : sols) {
        Eigen::VectorXcd w(rec.roots.lambda.size());
        for (size_t i = 0; i < rec.roots.lambda.size(); ++i) {
          w(i) = rec.roots.lambda[i];
        }
        if (w.size() == n) warm.push_back(std::move(w));
      }

      pt["matched"] = match.matched_count;
      pt["total"] = match.total_states;
      pt["matched_fraction"] =
          static_cast<double>(match.matched_count) / match.total_states;
      pt["max_rel_err"] = match.max_err;
      pt["pass"] = match.matched_count == match.total_states;
      all_pass = all_pass && (match.matched_count == match.total_states);
    } catch (const std::exception& e) {
      pt["error"] = e.what();
      pt["pass"] = false;
      all_pass = false;
    }
    points.push_back(std::move(pt));
  }

  report["points"] = points;
  report["pass"] = all_pass;
  report["timings"] = {{"total_ms", ms_since(t0)}};
  return report;
}

bool report_passed(const json& report) {
  return report.value("pass", false);
}

std::string report_digest(const json& report) {
  json clean = report;
  clean.erase("timings");
  return clean.dump();
}

}  // namespace odba::bench
