// tq_ansatz.hpp — the inhomogeneous T-Q relation for the open chain, its
// Bethe ansatz equations at finite eta, and the quasi-classical (Gaudin)
// eigenvalues and equations.

#pragma once

#include <limits>
#include <vector>

#include "odba/gaudin_ops.hpp"
#include "odba/vertex_model.hpp"

namespace odba {

// ----------------------------------- roots ----------------------------------

enum class RootMode { kChain, kGaudin };

// A candidate/converged set of Bethe roots. The root list normally carries N
// entries; fewer appear only in the homogeneous branch (parallel boundaries),
// where the missing roots have escaped to infinity.
struct BetheRoots {
  std::vector<Complex> lambda;
  RootMode mode = RootMode::kGaudin;
  Complex eta;  // reflection shift in chain mode; ignored for gaudin
  double residual_norm = std::numeric_limits<double>::quiet_NaN();
  bool canonical = false;
  bool colliding = false;
};

// Distance below which a root is considered to sit on a pole/degeneracy
// manifold of the equations.
inline constexpr double kCollisionTol = 1e-8;

// chain: poles at +-theta_i and +-theta_i - eta, the Q-degenerate points
// {0, -eta} and the reflection fixed point -eta/2, pairwise root collisions.
bool chain_roots_collide(const std::vector<Complex>& lambda,
                         const ChainSpec& spec, double tol = kCollisionTol);
// gaudin: poles at +-theta_i, +-xi, the fixed point 0, pairwise collisions.
bool gaudin_roots_collide(const std::vector<Complex>& lambda,
                          const std::vector<Complex>& theta, Complex xi,
                          double tol = kCollisionTol);

// ------------------------------- T-Q machinery ------------------------------

// Coefficient functions of the T-Q relation for a fixed chain + boundary.
struct TQContext {
  ChainSpec spec;
  OpenBoundary boundary;

  TQContext(ChainSpec spec_in, OpenBoundary boundary_in);

  Complex a_bar(Complex u) const;
  Complex d_bar(Complex u) const;  // equals a_bar(-u-eta) identically
  Complex f_poly(Complex u) const;
  Complex c() const;  // 2 (h1.h2 - 1); vanishes for parallel boundaries
};

// Q(u) = prod (u - l_j)(u + l_j + eta)  [chain]  /  prod (u - l_j)(u + l_j)
// [gaudin]; symmetric under u -> -u-eta (resp. u -> -u).
Complex q_eval(Complex u, const BetheRoots& r);

// Eigenvalue ansatz Lambda(u); throws CollisionError at Q-zeros.
Complex lambda_eval(Complex u, const BetheRoots& r, const TQContext& ctx);

// Bethe-equation residuals, normalized by the largest constituent term so
// tolerances are scale-free. Throw CollisionError on colliding roots.
std::vector<Complex> chain_bae_residual(const BetheRoots& r,
                                        const TQContext& ctx);
std::vector<Complex> gaudin_bae_residual(const BetheRoots& r,
                                         const GaudinBoundary& g,
                                         const std::vector<Complex>& theta);

// Gaudin eigenvalue E_j for 1-based site j.
Complex gaudin_energy(int j, const BetheRoots& r, const GaudinBoundary& g,
                      const std::vector<Complex>& theta);

// raw residual + per-component scale, the solver-facing form
struct ScaledResidual {
  Eigen::VectorXcd value;
  Eigen::VectorXd scale;
};
ScaledResidual chain_bae_scaled(const Eigen::VectorXcd& lambda,
                                const TQContext& ctx);
ScaledResidual gaudin_bae_scaled(const Eigen::VectorXcd& lambda,
                                 const GaudinBoundary& g,
                                 const std::vector<Complex>& theta);

// -------------------------- eigenvalue polynomials --------------------------

enum class LambdaSource { kExactDiag, kTqRelation };

struct LambdaPoly {
  int state_index = -1;
  Poly poly;  // degree 2N+2
  LambdaSource source = LambdaSource::kExactDiag;
};

struct LambdaRelationResiduals {
  std::vector<double> functional;  // one per site
  double crossing;
  double initial;
  double asymptotic;
  double degree;  // 0 when the leading coefficient survives truncation
};

// Residuals of the functional relations / crossing / initial condition /
// asymptotics on an eigenvalue polynomial. Note: the printed functional
// relation carries an overall sign slip; the form checked here,
//   L(th_j) L(th_j - eta) = 4 (th_j^2 - eta^2) (th_j^2 - xi^2)
//     (th_j^2 - xibar^2) / (4 th_j^2 - eta^2) * prod_i (...)
// is the one exact diagonalization satisfies.
LambdaRelationResiduals lambda_relations_residuals(const LambdaPoly& p,
                                                   const ChainSpec& spec,
                                                   const OpenBoundary& b);

// RHS of the functional relation at site j (1-based)
Complex functional_relation_rhs(int j, const ChainSpec& spec,
                                const OpenBoundary& b);

}  // namespace odba
