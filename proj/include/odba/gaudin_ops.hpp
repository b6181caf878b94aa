// gaudin_ops.hpp — quasi-classical boundary expansion, the closed-form Gaudin
// operators H_j, and an independent finite-difference construction of H_j from
// the transfer matrix.

#pragma once

#include <vector>

#include "odba/vertex_model.hpp"

namespace odba {

// Boundary data of the Gaudin limit: the right boundary is expanded around
// the left one, h2(eta) = h1 + eta h21 + eta^2/2 h22 + ..., xibar(eta) =
// -xi + eta xi1. Unit normalization of h2 forces h1.h21 = 0 and
// h1.h22 = -|h21|^2; h22 is a completion choice the physics is blind to.
struct GaudinBoundary {
  Complex xi;
  Complex xi1;
  Vec3 h1;
  Vec3 h21;
  Vec3 h22;

  // default completion: h22 = -|h21|^2 h1 (minimal norm)
  GaudinBoundary(Complex xi_in, Complex xi1_in, const Vec3& h1_in,
                 const Vec3& h21_in);
  GaudinBoundary(Complex xi_in, Complex xi1_in, const Vec3& h1_in,
                 const Vec3& h21_in, const Vec3& h22_in);
};

// Finite-eta boundary obtained from the expansion; h2 is renormalized to unit
// length, which perturbs it only at O(eta^3). eta must be (numerically) real
// so the boundary fields stay real.
OpenBoundary boundary_at_eta(const GaudinBoundary& g, Complex eta);

// prod_{i!=j}(th_j-th_i) prod_i(th_j+th_i) (th_j^2-xi^2): the scalar
// coefficient of the leading term of tau(theta_j)/eta. Site index j is
// 1-based.
Complex leading_scalar(int j, const ChainSpec& spec, const GaudinBoundary& g);

// Closed-form Gaudin operator H_j (1-based site index).
Op hamiltonian(int j, const ChainSpec& spec, const GaudinBoundary& g);

struct FdResult {
  Op op;
  double error_estimate;  // relative size of the last extrapolation update
};

const std::vector<Complex>& default_eta_ladder();

// H_j by Richardson extrapolation of (tau(theta_j)/eta - leading term)/eta
// over a ladder of small eta values. Serves as the independent oracle for
// `hamiltonian`.
FdResult hamiltonian_fd(int j, const ChainSpec& spec, const GaudinBoundary& g,
                        const std::vector<Complex>& eta_ladder =
                            default_eta_ladder());

}  // namespace odba
