// roots.hpp — damped Newton with finite-difference Jacobians, multistart
// enumeration with canonical-form deduplication, and canonicalization of
// Bethe roots under the reflection symmetry of Q.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "odba/tq_ansatz.hpp"

namespace odba {

struct SolveOptions {
  int max_iter = 200;
  double step_tol = 1e-13;
  double residual_tol = 1e-12;
  double damping = 0.5;
  int max_backtracks = 30;
  int starts = 0;         // 0: default 64 * 2^num_roots
  std::uint64_t seed = 1;
  double dedup_tol = 1e-7;
  double box = 0.0;       // seeding disk radius; 0: default 2 max|theta|
  double collision_tol = kCollisionTol;
  int threads = 0;        // 0: ODBA_THREADS env, else hardware concurrency
};

// A root-finding problem: residual with per-component scales, a pole guard,
// and seeding hints. Factories below wire the Bethe equations in.
struct BaeProblem {
  int num_roots = 0;
  RootMode mode = RootMode::kGaudin;
  Complex eta;
  std::function<ScaledResidual(const Eigen::VectorXcd&)> residual;
  std::function<bool(const Eigen::VectorXcd&)> colliding;  // may be empty
  std::vector<Complex> seed_anchors;  // typically the theta configuration
  double far_scale = 0.0;  // second seeding scale; 0 disables the far mode
};

BaeProblem make_chain_problem(const TQContext& ctx, int num_roots);
BaeProblem make_gaudin_problem(const GaudinBoundary& g,
                               const std::vector<Complex>& theta,
                               int num_roots);

// wraps a plain residual function (unit scales, no pole guard)
BaeProblem make_plain_problem(
    int num_roots, std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)> f);

enum class SolveStatus {
  kConverged,
  kMaxIterations,
  kSingularJacobian,
  kCollision,
  kStalled
};

struct NewtonResult {
  SolveStatus status = SolveStatus::kMaxIterations;
  BetheRoots roots;  // canonical on success
  int iterations = 0;
};

// Damped Newton iteration. Success requires the normalized residual
// (max_j |r_j|/scale_j) to reach residual_tol; a non-converged point is
// never reported as success.
NewtonResult newton(const BaeProblem& p, const Eigen::VectorXcd& x0,
                    const SolveOptions& opts);

// Multistart enumeration: `starts` Newton attempts from mixed random seeds
// (uniform disk, perturbed +-theta anchors, and a near/far split at
// far_scale), deduplicated by canonical-form distance. Deterministic for a
// fixed options seed; `stop_when` > 0 stops after that many distinct roots.
std::vector<BetheRoots> enumerate_roots(
    const BaeProblem& p, const SolveOptions& opts, int stop_when = 0,
    const std::vector<Eigen::VectorXcd>& warm_starts = {});

// Reflection representative per root (chain {l, -l-eta}: Re(2l+eta) >= 0,
// gaudin {l, -l}: Re l >= 0; ties by Im >= 0), sorted lexicographically.
// Idempotent.
BetheRoots canonicalize(const BetheRoots& r);

}  // namespace odba
