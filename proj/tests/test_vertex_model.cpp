#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "odba/vertex_model.hpp"
#include "oracles.hpp"

using namespace odba;

namespace {

Complex cgauss(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

Vec3 runit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v(g(rng), g(rng), g(rng));
  return v.normalized();
}

OpenBoundary random_boundary(std::mt19937_64& rng) {
  return OpenBoundary(cgauss(rng), cgauss(rng), runit(rng), runit(rng));
}

}  // namespace

TEST_CASE("r_matrix at the origin is eta P") {
  const Complex eta(0.7, -0.2);
  CHECK((r_matrix(0, eta) - eta * permutation4()).norm() == 0.0);
}

TEST_CASE("r_matrix entries by direct substitution") {
  const Eigen::Matrix4cd r = r_matrix(1.0, 0.5);
  CHECK(std::abs(r(0, 0) - 1.5) < 1e-15);
  CHECK(std::abs(r(3, 3) - 1.5) < 1e-15);
  CHECK(std::abs(r(1, 1) - 1.0) < 1e-15);
  CHECK(std::abs(r(1, 2) - 0.5) < 1e-15);
  CHECK(std::abs(r(2, 1) - 0.5) < 1e-15);
  CHECK(std::abs(r(2, 2) - 1.0) < 1e-15);
  CHECK(std::abs(r(0, 1)) + std::abs(r(0, 2)) + std::abs(r(0, 3)) == 0.0);
}

TEST_CASE("r_matrix at eta = 0 is u times the identity") {
  const Complex u(1.3, 0.4);
  CHECK((r_matrix(u, 0) - u * Eigen::Matrix4cd::Identity()).norm() == 0.0);
}

TEST_CASE("R(u) - u id - eta P vanishes entrywise") {
  std::mt19937_64 rng(5);
  const Complex u = cgauss(rng), eta = cgauss(rng);
  const Eigen::Matrix4cd diff =
      r_matrix(u, eta) - u * Eigen::Matrix4cd::Identity() -
      eta * permutation4();
  CHECK(diff.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("R-matrix identities at random spectral points") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const Complex eta = cgauss(rng);
    const Complex pts[3] = {cgauss(rng), cgauss(rng), cgauss(rng)};
    CHECK(check_r_identity(RIdentity::kQybe, {pts, 3}, eta) < 1e-13);
    CHECK(check_r_identity(RIdentity::kUnitarity, {pts, 1}, eta) < 1e-13);
    CHECK(check_r_identity(RIdentity::kCrossing, {pts, 1}, eta) < 1e-13);
    CHECK(check_r_identity(RIdentity::kAntisymmetry, {}, eta) < 1e-13);
    CHECK(check_r_identity(RIdentity::kQuasiClassical, {pts, 1}, eta) <
          1e-13);
  }
  CHECK_THROWS_AS(check_r_identity(RIdentity::kQybe, {}, Complex(1.0)),
                  std::invalid_argument);
}

TEST_CASE("k_minus special values") {
  std::mt19937_64 rng(2);
  const OpenBoundary b(Complex(2, 0), Complex(1, 0), Vec3(0, 0, 1),
                       Vec3(1, 0, 0));
  CHECK((k_minus(0, b) - 2.0 * identity2()).norm() == 0.0);
  const Eigen::Matrix2cd k = k_minus(1.0, b);
  CHECK(std::abs(k(0, 0) - 3.0) == 0.0);
  CHECK(std::abs(k(1, 1) - 1.0) == 0.0);
  CHECK(std::abs(k(0, 1)) == 0.0);
}

TEST_CASE("k_plus special values") {
  const Complex eta(0.3, 0.0);
  const OpenBoundary b(Complex(2, 0), Complex(1, 0), Vec3(0, 0, 1),
                       Vec3(1, 0, 0));
  CHECK((k_plus(-eta, b, eta) - b.xibar * identity2()).norm() == 0.0);
  const Eigen::Matrix2cd k = k_plus(0.0, b, eta);
  CHECK(std::abs(k(0, 0) - 1.0) == 0.0);
  CHECK(std::abs(k(0, 1) - 0.3) == 0.0);
  CHECK(std::abs(k(1, 0) - 0.3) == 0.0);
}

TEST_CASE("reflection equation residuals") {
  std::mt19937_64 rng(29);
  const Complex eta(0.45, 0.15);
  const OpenBoundary b = random_boundary(rng);
  const Complex u(0.8, -0.3);
  CHECK(check_reflection(ReflectionKind::kReflection, u, u, eta, b) < 1e-15);
  for (int rep = 0; rep < 20; ++rep) {
    const OpenBoundary br = random_boundary(rng);
    const Complex u1 = cgauss(rng), u2 = cgauss(rng);
    const Complex e = cgauss(rng);
    CHECK(check_reflection(ReflectionKind::kReflection, u1, u2, e, br) <
          1e-12);
    CHECK(check_reflection(ReflectionKind::kDualReflection, u1, u2, e, br) <
          1e-12);
  }
}

TEST_CASE("literal dual-reflection shift only closes at eta = 1") {
  std::mt19937_64 rng(31);
  const OpenBoundary b = random_boundary(rng);
  const Complex u1 = cgauss(rng), u2 = cgauss(rng);
  const double off = check_reflection(ReflectionKind::kDualReflection, u1, u2,
                                      Complex(0.6, 0.1), b,
                                      DualShift::kLiteralTwo);
  CHECK(off > 1e-4);
  const double at_one = check_reflection(ReflectionKind::kDualReflection, u1,
                                         u2, Complex(1.0, 0.0), b,
                                         DualShift::kLiteralTwo);
  CHECK(at_one < 1e-13);
}

TEST_CASE("ChainSpec enforces the inhomogeneity constraints") {
  const Complex eta(0.4, 0.0);
  CHECK_THROWS_AS(ChainSpec(2, {Complex(1.0), Complex(1.0)}, eta),
                  std::invalid_argument);
  CHECK_THROWS_AS(ChainSpec(2, {Complex(1.0), Complex(-1.0)}, eta),
                  std::invalid_argument);
  CHECK_THROWS_AS(ChainSpec(1, {Complex(0.0)}, eta), std::invalid_argument);
  CHECK_THROWS_AS(ChainSpec(1, {Complex(0.2)}, Complex(0.4)),
                  std::invalid_argument);  // 2 theta = eta
  CHECK_THROWS_AS(ChainSpec(2, {Complex(1.0)}, eta), std::invalid_argument);
  CHECK_NOTHROW(ChainSpec(2, {Complex(1.0, 0.1), Complex(-0.6, 0.4)}, eta));
}

TEST_CASE("OpenBoundary requires unit fields") {
  CHECK_THROWS_AS(OpenBoundary(1.0, 1.0, Vec3(0, 0, 2), Vec3(1, 0, 0)),
                  std::invalid_argument);
}

TEST_CASE("single-site monodromy is one R factor") {
  const ChainSpec spec(1, {Complex(0.9, 0.2)}, Complex(0.5, 0.1));
  const Complex u(0.3, -0.7);
  const Monodromies m = monodromies(u, spec);
  const Complex v = u - spec.theta[0];
  // R_{01}(v) blocks: v delta_ab + eta E_{ba}
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Op expect = spec.eta * embed(matrix_unit(b, a), 1, 1);
      if (a == b) expect += v * Op::Identity(2, 2);
      CHECK(rel_residual(m.T.block(a, b), expect) < 1e-15);
    }
  }
}

TEST_CASE("monodromy blocks match the full Kronecker oracle") {
  std::mt19937_64 rng(41);
  const ChainSpec spec(2, {Complex(0.8, 0.25), Complex(-1.1, 0.6)},
                       Complex(0.45, 0.1));
  const OpenBoundary b = random_boundary(rng);
  for (int rep = 0; rep < 4; ++rep) {
    const Complex u = cgauss(rng);
    CHECK(rel_residual(transfer_matrix(u, spec, b),
                       oracle::transfer_kron(u, spec, b)) < 1e-12);
  }
}

TEST_CASE("transfer via blocks equals the oracle at N = 3") {
  std::mt19937_64 rng(43);
  const ChainSpec spec(3,
                       {Complex(0.9, 0.1), Complex(-1.3, 0.45),
                        Complex(0.55, -0.8)},
                       Complex(0.4, -0.2));
  const OpenBoundary b = random_boundary(rng);
  const Complex u = cgauss(rng);
  CHECK(rel_residual(transfer_matrix(u, spec, b),
                     oracle::transfer_kron(u, spec, b)) < 1e-12);
}

TEST_CASE("quasi-classical monodromy collapses to a scalar") {
  const ChainSpec spec(2, {Complex(0.8, 0.25), Complex(-1.1, 0.6)},
                       Complex(0, 0));
  const Complex u(0.9, 0.4);
  const Monodromies m = monodromies(u, spec);
  Complex prod(1, 0);
  for (const Complex& t : spec.theta) prod *= u - t;
  CHECK(rel_residual(m.T.block(0, 0), prod * Op::Identity(4, 4)) < 1e-15);
  CHECK(rel_residual(m.T.block(1, 1), prod * Op::Identity(4, 4)) < 1e-15);
  CHECK(m.T.block(0, 1).norm() == 0.0);
  CHECK(m.T.block(1, 0).norm() == 0.0);
}

TEST_CASE("transfer matrix initial value and commutativity") {
  std::mt19937_64 rng(47);
  const ChainSpec spec(3,
                       {Complex(0.9, 0.1), Complex(-1.3, 0.45),
                        Complex(0.55, -0.8)},
                       Complex(0.43, 0.21));
  const OpenBoundary b = random_boundary(rng);

  Complex init = 2.0 * b.xi * b.xibar;
  for (const Complex& t : spec.theta) init *= (spec.eta - t) * (spec.eta + t);
  CHECK(rel_residual(transfer_matrix(0, spec, b),
                     init * Op::Identity(spec.dim(), spec.dim())) < 1e-10);

  for (int rep = 0; rep < 5; ++rep) {
    const Op tu = transfer_matrix(cgauss(rng), spec, b);
    const Op tv = transfer_matrix(cgauss(rng), spec, b);
    CHECK(commutator_residual(tu, tv) < 1e-10);
  }
}

TEST_CASE("transfer matrix crossing holds at operator level") {
  std::mt19937_64 rng(53);
  const ChainSpec spec(2, {Complex(0.8, 0.25), Complex(-1.1, 0.6)},
                       Complex(0.45, 0.1));
  const OpenBoundary b = random_boundary(rng);
  for (int rep = 0; rep < 5; ++rep) {
    const Complex u = cgauss(rng);
    CHECK(rel_residual(transfer_matrix(-u - spec.eta, spec, b),
                       transfer_matrix(u, spec, b)) < 1e-12);
  }
}

TEST_CASE("every transfer-matrix entry is a polynomial of degree 2N+2") {
  std::mt19937_64 rng(59);
  const int n = 2;
  const ChainSpec spec(n, {Complex(0.8, 0.25), Complex(-1.1, 0.6)},
                       Complex(0.45, 0.1));
  const OpenBoundary b = random_boundary(rng);
  const int count = 2 * n + 4;
  std::vector<Complex> pts;
  for (int k = 0; k < count; ++k) {
    const double phi = 2.0 * M_PI * (k + 0.31) / count;
    pts.push_back(2.3 * Complex(std::cos(phi), std::sin(phi)));
  }
  std::vector<Op> taus;
  for (const Complex& u : pts) taus.push_back(transfer_matrix(u, spec, b));
  for (const auto [r, c] : {std::pair{0, 0}, {1, 2}, {3, 1}}) {
    std::vector<std::pair<Complex, Complex>> samples;
    for (int k = 0; k < count; ++k) samples.emplace_back(pts[k], taus[k](r, c));
    CHECK_NOTHROW(poly_interp(samples, 2 * n + 2));
  }
}

TEST_CASE("large-chain smoke: N = 6 initial value") {
  std::mt19937_64 rng(61);
  std::vector<Complex> theta;
  for (int k = 0; k < 6; ++k) {
    theta.emplace_back((k % 2 ? -1 : 1) * (0.6 + 0.2 * k), 0.1 + 0.05 * k);
  }
  const ChainSpec spec(6, theta, Complex(0.37, 0.12));
  const OpenBoundary b = random_boundary(rng);
  Complex init = 2.0 * b.xi * b.xibar;
  for (const Complex& t : theta) init *= (spec.eta - t) * (spec.eta + t);
  CHECK(rel_residual(transfer_matrix(0, spec, b),
                     init * Op::Identity(64, 64)) < 1e-10);
}
