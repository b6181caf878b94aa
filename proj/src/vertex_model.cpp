#include "odba/vertex_model.hpp"

#include <cmath>
#include <sstream>

namespace odba {

namespace {
constexpr double kTiny = 1e-300;

double rel4(const Eigen::Matrix4cd& lhs, const Eigen::Matrix4cd& rhs) {
  return (lhs - rhs).norm() / std::max({lhs.norm(), rhs.norm(), kTiny});
}
}  // namespace

// ----------------------------------- data -----------------------------------

ChainSpec::ChainSpec(int n, std::vector<Complex> theta_in, Complex eta_in,
                     double separation_tol)
    : num_sites(n), theta(std::move(theta_in)), eta(eta_in) {
  if (num_sites < 1 || num_sites > 12) {
    throw std::invalid_argument("ChainSpec: site count out of range");
  }
  if (static_cast<int>(theta.size()) != num_sites) {
    throw std::invalid_argument("ChainSpec: theta size != N");
  }
  std::ostringstream bad;
  for (int i = 0; i < num_sites; ++i) {
    if (std::abs(theta[i]) <= separation_tol) {
      bad << "theta_" << i + 1 << " too close to 0";
    }
    if (std::abs(2.0 * theta[i] - eta) <= separation_tol ||
        std::abs(2.0 * theta[i] + eta) <= separation_tol) {
      bad << "2 theta_" << i + 1 << " too close to +-eta";
    }
    for (int j = i + 1; j < num_sites; ++j) {
      if (std::abs(theta[i] - theta[j]) <= separation_tol) {
        bad << "theta_" << i + 1 << " ~ theta_" << j + 1;
      }
      if (std::abs(theta[i] + theta[j]) <= separation_tol) {
        bad << "theta_" << i + 1 << " ~ -theta_" << j + 1;
      }
    }
  }
  if (!bad.str().empty()) {
    throw std::invalid_argument("ChainSpec: inhomogeneity constraint violated: " +
                                bad.str());
  }
}

double ChainSpec::max_theta_mag() const {
  double m = 0.0;
  for (const Complex& t : theta) m = std::max(m, std::abs(t));
  return m;
}

OpenBoundary::OpenBoundary(Complex xi_in, Complex xibar_in, const Vec3& h1_in,
                           const Vec3& h2_in)
    : xi(xi_in), xibar(xibar_in), h1(h1_in), h2(h2_in) {
  if (std::abs(h1.norm() - 1.0) > 1e-12 || std::abs(h2.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("OpenBoundary: h1, h2 must be unit vectors");
  }
}

// -------------------------------- constructions -----------------------------

const Eigen::Matrix4cd& permutation4() {
  static const Eigen::Matrix4cd p = [] {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = 1;
    m(1, 2) = 1;
    m(2, 1) = 1;
    m(3, 3) = 1;
    return m;
  }();
  return p;
}

Eigen::Matrix4cd r_matrix(Complex u, Complex eta) {
  return u * Eigen::Matrix4cd::Identity() + eta * permutation4();
}

Eigen::Matrix2cd k_minus(Complex u, const OpenBoundary& b) {
  return b.xi * identity2() + u * pauli_dot(b.h1);
}

Eigen::Matrix2cd k_plus(Complex u, const OpenBoundary& b, Complex eta) {
  return b.xibar * identity2() + (u + eta) * pauli_dot(b.h2);
}

namespace {

// R_{0,site}(v) as a 2x2 auxiliary block matrix:
// block(a,b) = v delta_ab + eta E_{ba} at `site`
AuxBlockMatrix r_aux_blocks(Complex v, Complex eta, int site,
                            const ChainSpec& spec) {
  AuxBlockMatrix m(spec.dim());
  const Op id = Op::Identity(spec.dim(), spec.dim());
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      m.block(a, b) = eta * embed(matrix_unit(b, a), site, spec.num_sites);
      if (a == b) m.block(a, b) += v * id;
    }
  }
  return m;
}

}  // namespace

Monodromies monodromies(Complex u, const ChainSpec& spec) {
  AuxBlockMatrix t = r_aux_blocks(u - spec.theta[spec.num_sites - 1], spec.eta,
                                  spec.num_sites, spec);
  for (int i = spec.num_sites - 1; i >= 1; --i) {
    t = t * r_aux_blocks(u - spec.theta[i - 1], spec.eta, i, spec);
  }
  AuxBlockMatrix that = r_aux_blocks(u + spec.theta[0], spec.eta, 1, spec);
  for (int i = 2; i <= spec.num_sites; ++i) {
    that = that * r_aux_blocks(u + spec.theta[i - 1], spec.eta, i, spec);
  }
  return Monodromies{std::move(t), std::move(that)};
}

Op transfer_matrix(Complex u, const ChainSpec& spec, const OpenBoundary& b) {
  Monodromies m = monodromies(u, spec);
  const AuxBlockMatrix km = AuxBlockMatrix::from_scalar(k_minus(u, b), spec.dim());
  const AuxBlockMatrix doubled = m.T * km * m.That;
  Op tau = doubled.trace_with(k_plus(u, b, spec.eta));
  require_finite(tau, "transfer_matrix");
  return tau;
}

// ------------------------------ identity checkers ---------------------------

double check_r_identity(RIdentity kind, std::span<const Complex> points,
                        Complex eta) {
  auto need = [&](size_t n) {
    if (points.size() != n) {
      throw std::invalid_argument("check_r_identity: wrong argument count");
    }
  };
  switch (kind) {
    case RIdentity::kQybe: {
      need(3);
      const Complex u12 = points[0] - points[1];
      const Complex u13 = points[0] - points[2];
      const Complex u23 = points[1] - points[2];
      const Op r12 = embed_two_site(r_matrix(u12, eta), 1, 2, 3);
      const Op r13 = embed_two_site(r_matrix(u13, eta), 1, 3, 3);
      const Op r23 = embed_two_site(r_matrix(u23, eta), 2, 3, 3);
      return rel_residual(r12 * r13 * r23, r23 * r13 * r12);
    }
    case RIdentity::kUnitarity: {
      need(1);
      const Complex u = points[0];
      const Eigen::Matrix4cd r21 =
          permutation4() * r_matrix(-u, eta) * permutation4();
      const Eigen::Matrix4cd lhs = r_matrix(u, eta) * r21;
      const Eigen::Matrix4cd rhs =
          -(u + eta) * (u - eta) * Eigen::Matrix4cd::Identity();
      return rel4(lhs, rhs);
    }
    case RIdentity::kCrossing: {
      need(1);
      const Complex u = points[0];
      const Eigen::Matrix4cd r = r_matrix(-u - eta, eta);
      Eigen::Matrix4cd rt2;  // partial transpose in the second space
      for (int a = 0; a < 2; ++a)
        for (int bq = 0; bq < 2; ++bq)
          for (int c = 0; c < 2; ++c)
            for (int d = 0; d < 2; ++d)
              rt2(2 * a + d, 2 * c + bq) = r(2 * a + bq, 2 * c + d);
      Eigen::Matrix4cd v1 = Eigen::Matrix4cd::Zero();
      const Eigen::Matrix2cd v = -Complex(0, 1) * pauli_y();
      v1.block<2, 2>(0, 2) = v(0, 1) * identity2();
      v1.block<2, 2>(2, 0) = v(1, 0) * identity2();
      return rel4(r_matrix(u, eta), v1 * rt2 * v1);
    }
    case RIdentity::kAntisymmetry: {
      need(0);
      const Eigen::Matrix4cd proj =
          (Eigen::Matrix4cd::Identity() - permutation4()) / 2.0;
      return rel4(r_matrix(-eta, eta), -2.0 * eta * proj);
    }
    case RIdentity::kQuasiClassical: {
      need(1);
      const Complex u = points[0];
      return rel4(r_matrix(u, Complex(0, 0)),
                  u * Eigen::Matrix4cd::Identity());
    }
  }
  throw std::invalid_argument("check_r_identity: unknown kind");
}

double check_reflection(ReflectionKind kind, Complex u1, Complex u2,
                        Complex eta, const OpenBoundary& b, DualShift shift) {
  auto lift1 = [](const Eigen::Matrix2cd& k) {
    Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
    out.block<2, 2>(0, 0) = k(0, 0) * identity2();
    out.block<2, 2>(0, 2) = k(0, 1) * identity2();
    out.block<2, 2>(2, 0) = k(1, 0) * identity2();
    out.block<2, 2>(2, 2) = k(1, 1) * identity2();
    return out;
  };
  auto lift2 = [](const Eigen::Matrix2cd& k) {
    Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
    out.block<2, 2>(0, 0) = k;
    out.block<2, 2>(2, 2) = k;
    return out;
  };
  auto r21 = [&](Complex u) {
    return Eigen::Matrix4cd(permutation4() * r_matrix(u, eta) *
                            permutation4());
  };

  if (kind == ReflectionKind::kReflection) {
    const Eigen::Matrix4cd k1 = lift1(k_minus(u1, b));
    const Eigen::Matrix4cd k2 = lift2(k_minus(u2, b));
    const Eigen::Matrix4cd lhs =
        r_matrix(u1 - u2, eta) * k1 * r21(u1 + u2) * k2;
    const Eigen::Matrix4cd rhs =
        k2 * r_matrix(u1 + u2, eta) * k1 * r21(u1 - u2);
    return rel4(lhs, rhs);
  }
  if (kind == ReflectionKind::kDualReflection) {
    const Complex s = shift == DualShift::kEtaScaled ? -u1 - u2 - 2.0 * eta
                                                     : -u1 - u2 - 2.0;
    const Eigen::Matrix4cd k1 = lift1(k_plus(u1, b, eta));
    const Eigen::Matrix4cd k2 = lift2(k_plus(u2, b, eta));
    const Eigen::Matrix4cd lhs = r_matrix(u2 - u1, eta) * k1 * r21(s) * k2;
    const Eigen::Matrix4cd rhs = k2 * r_matrix(s, eta) * k1 * r21(u2 - u1);
    return rel4(lhs, rhs);
  }
  throw std::invalid_argument("check_reflection: unknown kind");
}

}  // namespace odba
