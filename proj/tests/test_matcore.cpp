#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "odba/matcore.hpp"
#include "oracles.hpp"

using namespace odba;

namespace {

Complex cgauss(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

Eigen::Matrix2cd random2(std::mt19937_64& rng) {
  Eigen::Matrix2cd m;
  m << cgauss(rng), cgauss(rng), cgauss(rng), cgauss(rng);
  return m;
}

}  // namespace

TEST_CASE("embed places sigma_z at site 1 of 2") {
  const Op m = embed(pauli_z(), 1, 2);
  Op expect = Op::Zero(4, 4);
  expect.diagonal() << 1, 1, -1, -1;
  CHECK(rel_residual(m, expect) == 0.0);
}

TEST_CASE("embedding the identity gives the identity") {
  for (int k = 1; k <= 3; ++k) {
    CHECK(rel_residual(embed(identity2(), k, 3), Op::Identity(8, 8)) == 0.0);
  }
}

TEST_CASE("embed matches the Kronecker oracle") {
  const Op m = embed(pauli_x(), 2, 2);
  const Op expect = oracle::kron(Op(identity2()), Op(pauli_x()));
  CHECK(rel_residual(m, expect) == 0.0);

  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    const Eigen::Matrix2cd a = random2(rng);
    const Op lhs = embed(a, 2, 3);
    const Op rhs =
        oracle::kron(oracle::kron(Op(identity2()), Op(a)), Op(identity2()));
    CHECK(rel_residual(lhs, rhs) < 1e-15);
  }
}

TEST_CASE("disjoint-site embeddings commute") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const Op a = embed(random2(rng), 1, 3);
    const Op b = embed(random2(rng), 3, 3);
    CHECK(commutator_residual(a, b) < 1e-15);
  }
}

TEST_CASE("embed rejects bad site indices") {
  CHECK_THROWS_AS(embed(pauli_x(), 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(embed(pauli_x(), 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(embed(pauli_x(), 1, 0), std::invalid_argument);
}

TEST_CASE("embed_two_site factorizes over single-site embeddings") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    const Eigen::Matrix2cd a = random2(rng);
    const Eigen::Matrix2cd b = random2(rng);
    Eigen::Matrix4cd ab;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        ab.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    const Op lhs = embed_two_site(ab, 1, 3, 3);
    const Op rhs = embed(a, 1, 3) * embed(b, 3, 3);
    CHECK(rel_residual(lhs, rhs) < 1e-15);
  }
}

TEST_CASE("eig_general on a diagonal matrix") {
  Op m = Op::Zero(2, 2);
  m(0, 0) = 3.0;
  m(1, 1) = Complex(1, 2);
  const EigResult r = eig_general(m);
  std::vector<Complex> vals(r.values.data(), r.values.data() + 2);
  std::sort(vals.begin(), vals.end(),
            [](Complex a, Complex b) { return a.real() < b.real(); });
  CHECK(std::abs(vals[0] - Complex(1, 2)) < 1e-14);
  CHECK(std::abs(vals[1] - 3.0) < 1e-14);
}

TEST_CASE("eig_general on the 4x4 permutation") {
  Op p = Op::Zero(4, 4);
  p(0, 0) = 1;
  p(1, 2) = 1;
  p(2, 1) = 1;
  p(3, 3) = 1;
  const EigResult r = eig_general(p);
  int plus = 0, minus = 0;
  for (int k = 0; k < 4; ++k) {
    if (std::abs(r.values(k) - 1.0) < 1e-12) ++plus;
    if (std::abs(r.values(k) + 1.0) < 1e-12) ++minus;
  }
  CHECK(plus == 3);
  CHECK(minus == 1);
}

TEST_CASE("eig_general residual and round trip on random matrices") {
  std::mt19937_64 rng(19);
  for (int rep = 0; rep < 5; ++rep) {
    Op m(8, 8);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) m(i, j) = cgauss(rng);
    const EigResult r = eig_general(m);
    CHECK(r.residual <= 1e-10);
    // reconstruct from the returned factors only
    const Op recon = r.right_vectors * r.values.asDiagonal() *
                     r.right_vectors.inverse();
    CHECK(rel_residual(recon, m) < 1e-9);
    CHECK(r.condition >= 1.0);
  }
}

TEST_CASE("eig_general input validation") {
  CHECK_THROWS_AS(eig_general(Op::Zero(2, 3)), std::invalid_argument);
  Op nan_mat = Op::Zero(2, 2);
  nan_mat(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(eig_general(nan_mat));
}

TEST_CASE("eig_general flags near-defective input via the condition cap") {
  Op jordan(2, 2);
  jordan << 1.0, 1.0, 1e-14, 1.0;
  CHECK_THROWS_AS(eig_general(jordan, 1e6), EigenvalueError);
  try {
    eig_general(jordan, 1e6);
  } catch (const EigenvalueError& e) {
    CHECK(e.condition() > 1e6);
  }
}

TEST_CASE("poly_interp recovers an exact quadratic") {
  std::vector<std::pair<Complex, Complex>> samples = {
      {0.0, 1.0}, {1.0, 2.0}, {2.0, 5.0}};  // u^2 + 1
  const PolyFit fit = poly_interp(samples, 2);
  CHECK(std::abs(fit.poly.coeffs(0) - 1.0) < 1e-12);
  CHECK(std::abs(fit.poly.coeffs(1)) < 1e-12);
  CHECK(std::abs(fit.poly.coeffs(2) - 1.0) < 1e-12);
  CHECK(fit.max_mismatch < 1e-12);
}

TEST_CASE("poly_interp degree zero is the constant") {
  std::vector<std::pair<Complex, Complex>> samples = {{0.3, Complex(2, -1)},
                                                      {1.7, Complex(2, -1)}};
  const PolyFit fit = poly_interp(samples, 0);
  CHECK(std::abs(fit.poly.coeffs(0) - Complex(2, -1)) < 1e-12);
}

TEST_CASE("poly_interp rejects duplicate nodes") {
  std::vector<std::pair<Complex, Complex>> samples = {
      {1.0, 1.0}, {1.0, 2.0}, {2.0, 5.0}};
  CHECK_THROWS_AS(poly_interp(samples, 2), std::invalid_argument);
}

TEST_CASE("poly_interp flags a degree violation") {
  // samples of u^3 claimed to be quadratic
  std::vector<std::pair<Complex, Complex>> samples;
  for (double u : {-2.0, -0.5, 1.0, 2.5}) {
    samples.emplace_back(u, u * u * u);
  }
  CHECK_THROWS_AS(poly_interp(samples, 2), DegreeError);
}

TEST_CASE("poly_interp inverts evaluation on random polynomials") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    const int deg = 1 + static_cast<int>(rng() % 8);
    Poly p;
    p.coeffs.resize(deg + 1);
    for (int k = 0; k <= deg; ++k) p.coeffs(k) = cgauss(rng);
    std::vector<std::pair<Complex, Complex>> samples;
    for (int k = 0; k < deg + 3; ++k) {
      const double phi = 2.0 * M_PI * (k + 0.21) / (deg + 3);
      const Complex u = 1.4 * Complex(std::cos(phi), std::sin(phi));
      samples.emplace_back(u, p.eval(u));
    }
    const PolyFit fit = poly_interp(samples, deg);
    CHECK((fit.poly.coeffs - p.coeffs).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("Poly degeneracy flag tracks the leading coefficient") {
  Poly p;
  p.coeffs.resize(3);
  p.coeffs << 1.0, 1.0, 1e-12;
  CHECK(p.degenerate());
  p.coeffs(2) = 0.5;
  CHECK(!p.degenerate());
}

TEST_CASE("AuxBlockMatrix multiplication matches the full-space product") {
  std::mt19937_64 rng(31);
  const Eigen::Index d = 4;
  auto randop = [&] {
    Op m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) m(i, j) = cgauss(rng);
    return m;
  };
  AuxBlockMatrix a(d), b(d);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      a.block(i, j) = randop();
      b.block(i, j) = randop();
    }
  auto to_full = [&](const AuxBlockMatrix& m) {
    Op full(2 * d, 2 * d);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        full.block(i * d, j * d, d, d) = m.block(i, j);
    return full;
  };
  const AuxBlockMatrix c = a * b;
  CHECK(rel_residual(to_full(c), to_full(a) * to_full(b)) < 1e-15);

  Eigen::Matrix2cd k = random2(rng);
  Op traced = c.trace_with(k);
  Op expect = Op::Zero(d, d);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) expect += k(i, j) * c.block(j, i);
  CHECK(rel_residual(traced, expect) == 0.0);
}
