#include "odba/matcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <sstream>

namespace odba {

namespace {
constexpr double kTiny = 1e-300;
}

// --------------------------- small fixed matrices ---------------------------

const Eigen::Matrix2cd& pauli_x() {
  static const Eigen::Matrix2cd m = [] {
    Eigen::Matrix2cd s;
    s << 0, 1, 1, 0;
    return s;
  }();
  return m;
}

const Eigen::Matrix2cd& pauli_y() {
  static const Eigen::Matrix2cd m = [] {
    Eigen::Matrix2cd s;
    s << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return s;
  }();
  return m;
}

const Eigen::Matrix2cd& pauli_z() {
  static const Eigen::Matrix2cd m = [] {
    Eigen::Matrix2cd s;
    s << 1, 0, 0, -1;
    return s;
  }();
  return m;
}

const Eigen::Matrix2cd& identity2() {
  static const Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  return m;
}

Eigen::Matrix2cd matrix_unit(int a, int b) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(a, b) = 1.0;
  return m;
}

Eigen::Matrix2cd pauli_dot(const CVec3& v) {
  return v(0) * pauli_x() + v(1) * pauli_y() + v(2) * pauli_z();
}

// ------------------------------- norms / checks -----------------------------

double rel_residual(const Eigen::Ref<const Op>& a,
                    const Eigen::Ref<const Op>& b) {
  const double scale = std::max({a.norm(), b.norm(), kTiny});
  return (a - b).norm() / scale;
}

double commutator_residual(const Op& a, const Op& b) {
  const double scale = std::max(a.norm() * b.norm(), kTiny);
  return (a * b - b * a).norm() / scale;
}

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

void require_finite(const Op& m, const char* who) {
  if (!m.allFinite()) {
    throw std::runtime_error(std::string(who) +
                             ": operator has non-finite entries");
  }
}

// ------------------------------ site embedding ------------------------------

Op embed(const Eigen::Matrix2cd& a, int site, int num_sites) {
  if (num_sites < 1 || num_sites > 20) {
    throw std::invalid_argument("embed: num_sites out of range");
  }
  if (site < 1 || site > num_sites) {
    throw std::invalid_argument("embed: site index out of range");
  }
  const Eigen::Index dim = Eigen::Index(1) << num_sites;
  const Eigen::Index right = Eigen::Index(1) << (num_sites - site);
  const Eigen::Index left = dim / (2 * right);
  Op out = Op::Zero(dim, dim);
  for (Eigen::Index p = 0; p < left; ++p) {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        if (a(r, c) == Complex(0, 0)) continue;
        const Eigen::Index row0 = (p * 2 + r) * right;
        const Eigen::Index col0 = (p * 2 + c) * right;
        for (Eigen::Index q = 0; q < right; ++q) {
          out(row0 + q, col0 + q) = a(r, c);
        }
      }
    }
  }
  return out;
}

Op embed_two_site(const Eigen::Matrix4cd& m, int site_a, int site_b,
                  int num_sites) {
  if (num_sites < 2 || num_sites > 20) {
    throw std::invalid_argument("embed_two_site: num_sites out of range");
  }
  if (site_a < 1 || site_a > num_sites || site_b < 1 || site_b > num_sites ||
      site_a == site_b) {
    throw std::invalid_argument("embed_two_site: bad site pair");
  }
  const Eigen::Index dim = Eigen::Index(1) << num_sites;
  const int shift_a = num_sites - site_a;
  const int shift_b = num_sites - site_b;
  Op out = Op::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const int ba = static_cast<int>((col >> shift_a) & 1);
    const int bb = static_cast<int>((col >> shift_b) & 1);
    const Eigen::Index base =
        col & ~((Eigen::Index(1) << shift_a) | (Eigen::Index(1) << shift_b));
    for (int ra = 0; ra < 2; ++ra) {
      for (int rb = 0; rb < 2; ++rb) {
        const Complex v = m(2 * ra + rb, 2 * ba + bb);
        if (v == Complex(0, 0)) continue;
        const Eigen::Index row = base | (Eigen::Index(ra) << shift_a) |
                                 (Eigen::Index(rb) << shift_b);
        out(row, col) += v;
      }
    }
  }
  return out;
}

// ------------------------- general dense eigensolver ------------------------

EigResult eig_general(const Op& m, double condition_cap) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("eig_general: matrix must be square");
  }
  if (m.rows() > 256) {
    throw std::invalid_argument("eig_general: dim > 256 unsupported");
  }
  require_finite(m, "eig_general");

  Eigen::ComplexEigenSolver<Op> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw EigenvalueError("eig_general: QR iteration failed to converge",
                          std::numeric_limits<double>::infinity());
  }

  EigResult res;
  res.values = solver.eigenvalues();
  res.right_vectors = solver.eigenvectors();

  Eigen::JacobiSVD<Op> svd(res.right_vectors);
  const double smin = svd.singularValues().tail(1)(0);
  const double smax = svd.singularValues()(0);
  res.condition = smin > 0 ? smax / smin
                           : std::numeric_limits<double>::infinity();

  const Op lhs = m * res.right_vectors;
  const Op rhs = res.right_vectors * res.values.asDiagonal();
  res.residual = (lhs - rhs).norm() / std::max(m.norm(), kTiny);

  if (res.condition > condition_cap) {
    std::ostringstream msg;
    msg << "eig_general: eigenvector matrix condition " << res.condition
        << " exceeds cap " << condition_cap << " (near-defective input)";
    throw EigenvalueError(msg.str(), res.condition);
  }
  if (res.residual > kEigResidualTol) {
    std::ostringstream msg;
    msg << "eig_general: residual " << res.residual << " above contract";
    throw EigenvalueError(msg.str(), res.condition);
  }
  return res;
}

// --------------------------------- polynomials ------------------------------

Complex Poly::eval(Complex u) const {
  Complex acc(0, 0);
  for (Eigen::Index k = coeffs.size() - 1; k >= 0; --k) {
    acc = acc * u + coeffs(k);
  }
  return acc;
}

Poly Poly::derivative() const {
  if (coeffs.size() <= 1) return Poly{Eigen::VectorXcd::Zero(1)};
  Eigen::VectorXcd d(coeffs.size() - 1);
  for (Eigen::Index k = 1; k < coeffs.size(); ++k) {
    d(k - 1) = static_cast<double>(k) * coeffs(k);
  }
  return Poly{std::move(d)};
}

bool Poly::degenerate(double trunc) const {
  const double maxc = coeffs.cwiseAbs().maxCoeff();
  if (maxc == 0.0) return true;
  return std::abs(coeffs(coeffs.size() - 1)) <= trunc * maxc;
}

PolyFit poly_interp(const std::vector<std::pair<Complex, Complex>>& samples,
                    int degree, double tol) {
  if (degree < 0) throw std::invalid_argument("poly_interp: negative degree");
  const int n = static_cast<int>(samples.size());
  if (n < degree + 1) {
    throw std::invalid_argument("poly_interp: need at least degree+1 samples");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(samples[i].first - samples[j].first) < 1e-14) {
        throw std::invalid_argument("poly_interp: duplicate nodes");
      }
    }
  }

  // fit in u/s to keep the Vandermonde matrix well conditioned
  double s = 0.0;
  for (const auto& [u, v] : samples) s = std::max(s, std::abs(u));
  if (s == 0.0) s = 1.0;

  Eigen::MatrixXcd vand(n, degree + 1);
  Eigen::VectorXcd rhs(n);
  for (int i = 0; i < n; ++i) {
    const Complex w = samples[i].first / s;
    Complex p(1, 0);
    for (int k = 0; k <= degree; ++k) {
      vand(i, k) = p;
      p *= w;
    }
    rhs(i) = samples[i].second;
  }
  Eigen::VectorXcd scaled = vand.colPivHouseholderQr().solve(rhs);

  PolyFit fit;
  fit.poly.coeffs.resize(degree + 1);
  double pw = 1.0;
  for (int k = 0; k <= degree; ++k) {
    fit.poly.coeffs(k) = scaled(k) / pw;
    pw *= s;
  }

  const double yscale = std::max(rhs.cwiseAbs().maxCoeff(), kTiny);
  fit.max_mismatch = 0.0;
  for (int i = 0; i < n; ++i) {
    const double miss =
        std::abs(fit.poly.eval(samples[i].first) - samples[i].second) / yscale;
    fit.max_mismatch = std::max(fit.max_mismatch, miss);
  }
  if (fit.max_mismatch > tol) {
    throw DegreeError("poly_interp: samples are not a polynomial of degree " +
                          std::to_string(degree),
                      fit.max_mismatch);
  }
  return fit;
}

// ------------------------ 2x2 auxiliary block matrices ----------------------

AuxBlockMatrix::AuxBlockMatrix(Eigen::Index dim) : dim_(dim) {
  if (!is_power_of_two(dim)) {
    throw std::invalid_argument("AuxBlockMatrix: dim must be a power of two");
  }
  for (auto& b : blocks_) b = Op::Zero(dim, dim);
}

AuxBlockMatrix AuxBlockMatrix::identity(Eigen::Index dim) {
  AuxBlockMatrix m(dim);
  m.block(0, 0) = Op::Identity(dim, dim);
  m.block(1, 1) = Op::Identity(dim, dim);
  return m;
}

AuxBlockMatrix AuxBlockMatrix::from_scalar(const Eigen::Matrix2cd& k,
                                           Eigen::Index dim) {
  AuxBlockMatrix m(dim);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      m.block(a, b) = k(a, b) * Op::Identity(dim, dim);
    }
  }
  return m;
}

AuxBlockMatrix AuxBlockMatrix::operator*(const AuxBlockMatrix& rhs) const {
  if (dim_ != rhs.dim_) {
    throw std::invalid_argument("AuxBlockMatrix: dimension mismatch");
  }
  AuxBlockMatrix out(dim_);
  for (int a = 0; a < 2; ++a) {
    for (int c = 0; c < 2; ++c) {
      out.block(a, c) =
          block(a, 0) * rhs.block(0, c) + block(a, 1) * rhs.block(1, c);
    }
  }
  return out;
}

Op AuxBlockMatrix::trace_with(const Eigen::Matrix2cd& k) const {
  Op out = Op::Zero(dim_, dim_);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      out += k(a, b) * block(b, a);
    }
  }
  return out;
}

}  // namespace odba
