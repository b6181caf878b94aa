#include "odba/gaudin_ops.hpp"

#include <cmath>

namespace odba {

namespace {
constexpr double kOrthogonalityTol = 1e-12;
constexpr double kTiny = 1e-300;
}  // namespace

GaudinBoundary::GaudinBoundary(Complex xi_in, Complex xi1_in, const Vec3& h1_in,
                               const Vec3& h21_in)
    : GaudinBoundary(xi_in, xi1_in, h1_in, h21_in,
                     Vec3(-h21_in.squaredNorm() * h1_in)) {}

GaudinBoundary::GaudinBoundary(Complex xi_in, Complex xi1_in, const Vec3& h1_in,
                               const Vec3& h21_in, const Vec3& h22_in)
    : xi(xi_in), xi1(xi1_in), h1(h1_in), h21(h21_in), h22(h22_in) {
  if (std::abs(h1.norm() - 1.0) > kOrthogonalityTol) {
    throw std::invalid_argument("GaudinBoundary: h1 must be a unit vector");
  }
  if (std::abs(h1.dot(h21)) > kOrthogonalityTol) {
    throw std::invalid_argument("GaudinBoundary: h21 must be orthogonal to h1");
  }
  if (std::abs(h1.dot(h22) + h21.squaredNorm()) > kOrthogonalityTol) {
    throw std::invalid_argument(
        "GaudinBoundary: completion must satisfy h1.h22 = -|h21|^2");
  }
}

OpenBoundary boundary_at_eta(const GaudinBoundary& g, Complex eta) {
  if (std::abs(eta.imag()) > 1e-12 * std::max(1.0, std::abs(eta))) {
    throw std::invalid_argument(
        "boundary_at_eta: eta must be real (h2 is a real field)");
  }
  const double e = eta.real();
  const Vec3 v = g.h1 + e * g.h21 + 0.5 * e * e * g.h22;
  const double n = v.norm();
  if (n < 1e-8) {
    throw std::invalid_argument("boundary_at_eta: |h2(eta)| vanished");
  }
  return OpenBoundary(g.xi, -g.xi + g.xi1 * eta, g.h1, Vec3(v / n));
}

Complex leading_scalar(int j, const ChainSpec& spec, const GaudinBoundary& g) {
  if (j < 1 || j > spec.num_sites) {
    throw std::invalid_argument("leading_scalar: site index out of range");
  }
  const Complex tj = spec.theta[j - 1];
  Complex p(1, 0);
  for (int i = 1; i <= spec.num_sites; ++i) {
    if (i != j) p *= tj - spec.theta[i - 1];
    p *= tj + spec.theta[i - 1];
  }
  return p * (tj * tj - g.xi * g.xi);
}

Op hamiltonian(int j, const ChainSpec& spec, const GaudinBoundary& g) {
  if (j < 1 || j > spec.num_sites) {
    throw std::invalid_argument("hamiltonian: site index out of range");
  }
  const int n = spec.num_sites;
  const Eigen::Index dim = spec.dim();
  const Complex tj = spec.theta[j - 1];
  const Complex xi = g.xi;

  Complex pref(1, 0);
  for (int i = 1; i <= n; ++i) {
    if (i != j) pref *= tj - spec.theta[i - 1];
    pref *= tj + spec.theta[i - 1];
  }

  const Op id = Op::Identity(dim, dim);
  auto site_field = [&](const CVec3& v) {
    return embed(pauli_dot(v), j, n);
  };

  Op h = (xi * g.xi1 + tj - xi * xi / tj) * id;
  const Vec3 cross = g.h1.cross(g.h21);
  h += Complex(0, 1) * tj * tj * site_field(cross.cast<Complex>());
  h += tj * site_field(g.xi1 * g.h1.cast<Complex>() +
                       xi * g.h21.cast<Complex>());

  if (n > 1) {
    const Op sandwich_l = xi * id + tj * site_field(g.h1.cast<Complex>());
    const Op sandwich_r = -xi * id + tj * site_field(g.h1.cast<Complex>());
    for (int k = 1; k <= n; ++k) {
      if (k == j) continue;
      Op exch = embed(pauli_x(), j, n) * embed(pauli_x(), k, n) +
                embed(pauli_y(), j, n) * embed(pauli_y(), k, n) +
                embed(pauli_z(), j, n) * embed(pauli_z(), k, n) + id;
      h += (tj * tj - xi * xi) / (2.0 * (tj - spec.theta[k - 1])) * exch;
      h += 1.0 / (2.0 * (tj + spec.theta[k - 1])) *
           (sandwich_l * exch * sandwich_r);
    }
  }
  return pref * h;
}

const std::vector<Complex>& default_eta_ladder() {
  static const std::vector<Complex> ladder = {1e-2, 5e-3, 2.5e-3};
  return ladder;
}

FdResult hamiltonian_fd(int j, const ChainSpec& spec, const GaudinBoundary& g,
                        const std::vector<Complex>& eta_ladder) {
  if (eta_ladder.size() < 2) {
    throw std::invalid_argument("hamiltonian_fd: ladder needs >= 2 rungs");
  }
  if (j < 1 || j > spec.num_sites) {
    throw std::invalid_argument("hamiltonian_fd: site index out of range");
  }
  const Eigen::Index dim = spec.dim();
  const Complex tj = spec.theta[j - 1];
  const Complex ls = leading_scalar(j, spec, g);

  std::vector<Op> table;
  table.reserve(eta_ladder.size());
  for (const Complex& eta : eta_ladder) {
    const OpenBoundary b = boundary_at_eta(g, eta);
    const ChainSpec at_eta(spec.num_sites, spec.theta, eta);
    const Op tau = transfer_matrix(tj, at_eta, b);
    table.push_back((tau / eta - ls * Op::Identity(dim, dim)) / eta);
  }

  // Neville tableau in eta, extrapolated to 0; the diagonal updates must
  // shrink or the configuration is too degenerate to differentiate through.
  std::vector<Op> diag = {table[0]};
  double prev_update = std::numeric_limits<double>::infinity();
  double update = prev_update;
  for (size_t k = 1; k < eta_ladder.size(); ++k) {
    for (size_t m = 0; m + k < eta_ladder.size(); ++m) {
      const Complex x0 = eta_ladder[m];
      const Complex x1 = eta_ladder[m + k];
      table[m] = (x0 * table[m + 1] - x1 * table[m]) / (x0 - x1);
    }
    prev_update = update;
    update = (table[0] - diag.back()).norm() /
             std::max(table[0].norm(), kTiny);
    diag.push_back(table[0]);
    if (k >= 2 && update >= prev_update) {
      throw ConvergenceError(
          "hamiltonian_fd: extrapolation error non-decreasing across ladder");
    }
  }
  return FdResult{table[0], update};
}

}  // namespace odba
