// vertex_model.hpp — rational six-vertex R-matrix, boundary K-matrices,
// row-to-row monodromies and the open-chain double-row transfer matrix,
// plus residual checkers for the defining algebraic identities.

#pragma once

#include <span>
#include <vector>

#include "odba/matcore.hpp"

namespace odba {

// ----------------------------------- data -----------------------------------

struct ChainSpec {
  int num_sites = 0;
  std::vector<Complex> theta;  // per-site inhomogeneities
  Complex eta;                 // crossing parameter; 0 selects the Gaudin limit

  static constexpr double kDefaultSeparationTol = 1e-6;

  ChainSpec(int n, std::vector<Complex> theta_in, Complex eta_in,
            double separation_tol = kDefaultSeparationTol);

  Eigen::Index dim() const { return Eigen::Index(1) << num_sites; }
  double max_theta_mag() const;
};

struct OpenBoundary {
  Complex xi;
  Complex xibar;
  Vec3 h1;  // unit boundary field, left
  Vec3 h2;  // unit boundary field, right

  OpenBoundary(Complex xi_in, Complex xibar_in, const Vec3& h1_in,
               const Vec3& h2_in);
};

// -------------------------------- constructions -----------------------------

// R(u) = u id + eta P on C^2 (x) C^2
Eigen::Matrix4cd r_matrix(Complex u, Complex eta);

// the permutation operator P on C^2 (x) C^2
const Eigen::Matrix4cd& permutation4();

Eigen::Matrix2cd k_minus(Complex u, const OpenBoundary& b);
Eigen::Matrix2cd k_plus(Complex u, const OpenBoundary& b, Complex eta);

struct Monodromies {
  AuxBlockMatrix T;
  AuxBlockMatrix That;
};

// T(u) = R_{0N}(u-theta_N) ... R_{01}(u-theta_1),
// That(u) = R_{01}(u+theta_1) ... R_{0N}(u+theta_N),
// both as 2x2 auxiliary-space block matrices over quantum-space operators.
Monodromies monodromies(Complex u, const ChainSpec& spec);

// tau(u) = tr_aux( K+(u) T(u) K-(u) That(u) )
Op transfer_matrix(Complex u, const ChainSpec& spec, const OpenBoundary& b);

// ------------------------------ identity checkers ---------------------------

enum class RIdentity {
  kQybe,           // points: u1, u2, u3
  kUnitarity,      // points: u
  kCrossing,       // points: u
  kAntisymmetry,   // points: none
  kQuasiClassical  // points: u (evaluated at eta = 0)
};

// Relative Frobenius residual of the named R-matrix identity, evaluated by
// direct matrix arithmetic (8x8 for the Yang-Baxter equation, 4x4 otherwise).
double check_r_identity(RIdentity kind, std::span<const Complex> points,
                        Complex eta);

enum class ReflectionKind { kReflection, kDualReflection };

// The printed dual reflection equation carries a bare "-2" in the argument
// shift; dimensional consistency requires -2*eta. Both readings are
// evaluable so the discrepancy stays testable.
enum class DualShift { kEtaScaled, kLiteralTwo };

double check_reflection(ReflectionKind kind, Complex u1, Complex u2,
                        Complex eta, const OpenBoundary& b,
                        DualShift shift = DualShift::kEtaScaled);

}  // namespace odba
