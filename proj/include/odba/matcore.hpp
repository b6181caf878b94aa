// matcore.hpp — dense complex operators on the 2^N spin space, tensor-product
// site embedding, a general (non-Hermitian) eigensolver and polynomial
// interpolation. Everything else in the library is built on these.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "odba/errors.hpp"

namespace odba {

using Complex = std::complex<double>;
using Op = Eigen::MatrixXcd;     // dense operator on the 2^N quantum space
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

// --------------------------- small fixed matrices ---------------------------

const Eigen::Matrix2cd& pauli_x();
const Eigen::Matrix2cd& pauli_y();
const Eigen::Matrix2cd& pauli_z();
const Eigen::Matrix2cd& identity2();

// matrix unit E_{ab} = |a><b| in the site-local basis (|0> = spin up)
Eigen::Matrix2cd matrix_unit(int a, int b);

// v . sigma for a complex coefficient vector
Eigen::Matrix2cd pauli_dot(const CVec3& v);
inline Eigen::Matrix2cd pauli_dot(const Vec3& v) {
  return pauli_dot(CVec3(v.cast<Complex>()));
}

// ------------------------------- norms / checks -----------------------------

// ||a - b||_F / max(||a||_F, ||b||_F), 0 when both vanish
double rel_residual(const Eigen::Ref<const Op>& a, const Eigen::Ref<const Op>& b);

// ||[a,b]||_F / (||a||_F ||b||_F)
double commutator_residual(const Op& a, const Op& b);

bool is_power_of_two(Eigen::Index n);
void require_finite(const Op& m, const char* who);

// ------------------------------ site embedding ------------------------------

// id (x) ... (x) a (x) ... (x) id with `a` at position `site` (1-based,
// site 1 = most significant bit of the global basis index).
Op embed(const Eigen::Matrix2cd& a, int site, int num_sites);

// two-site analogue for a 4x4 acting on (site_a, site_b); used by the
// Yang-Baxter checks and the full tensor-product oracles
Op embed_two_site(const Eigen::Matrix4cd& m, int site_a, int site_b,
                  int num_sites);

// ------------------------- general dense eigensolver ------------------------

struct EigResult {
  Eigen::VectorXcd values;
  Op right_vectors;   // columns; m * V ~ V * diag(values)
  double condition;   // condition number of the eigenvector matrix
  double residual;    // ||m V - V diag||_F / ||m||_F
};

// Eigendecomposition of a general complex matrix, dim <= 256. Throws
// EigenvalueError when the factorization does not converge, the residual
// contract (<= 1e-10 relative) is violated, or cond(V) exceeds the cap.
EigResult eig_general(const Op& m, double condition_cap = 1e12);

inline constexpr double kEigResidualTol = 1e-10;

// --------------------------------- polynomials ------------------------------

struct Poly {
  Eigen::VectorXcd coeffs;  // lowest degree first

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Complex eval(Complex u) const;
  Poly derivative() const;

  // true when the leading coefficient is below `trunc` relative to the
  // largest coefficient (the polynomial does not genuinely have this degree)
  bool degenerate(double trunc = 1e-8) const;
};

struct PolyFit {
  Poly poly;
  double max_mismatch;  // worst relative misfit over all supplied samples
};

// Least-squares fit of a degree-`degree` polynomial through the samples
// (>= degree+1 points, pairwise distinct nodes). Surplus samples act as
// consistency checks; a misfit above `tol` throws DegreeError.
PolyFit poly_interp(const std::vector<std::pair<Complex, Complex>>& samples,
                    int degree, double tol = 1e-9);

// ------------------------ 2x2 auxiliary block matrices ----------------------

// A 2x2 matrix over quantum-space operators: the auxiliary-space form of the
// monodromy matrices. Block (a,b) is the coefficient of |a><b| in aux space.
class AuxBlockMatrix {
 public:
  explicit AuxBlockMatrix(Eigen::Index dim);

  static AuxBlockMatrix identity(Eigen::Index dim);
  // k_{ab} * Id: a scalar auxiliary matrix lifted to the quantum space
  static AuxBlockMatrix from_scalar(const Eigen::Matrix2cd& k,
                                    Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }
  Op& block(int a, int b) { return blocks_[2 * a + b]; }
  const Op& block(int a, int b) const { return blocks_[2 * a + b]; }

  AuxBlockMatrix operator*(const AuxBlockMatrix& rhs) const;

  // tr_aux(k * this) = sum_{ab} k(a,b) block(b,a)
  Op trace_with(const Eigen::Matrix2cd& k) const;

 private:
  Eigen::Index dim_;
  std::array<Op, 4> blocks_;
};

}  // namespace odba
