#include "odba/spectra.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <random>

namespace odba {

namespace {
constexpr double kTiny = 1e-300;
constexpr int kMaxComboAttempts = 5;
}  // namespace

CommonEigenbasis common_eigenbasis(const std::vector<Op>& ops,
                                   std::uint64_t seed, double commute_tol) {
  if (ops.empty()) {
    throw std::invalid_argument("common_eigenbasis: no operators");
  }
  const Eigen::Index dim = ops[0].rows();
  for (const Op& a : ops) {
    if (a.rows() != dim || a.cols() != dim) {
      throw std::invalid_argument("common_eigenbasis: dimension mismatch");
    }
  }
  for (size_t i = 0; i < ops.size(); ++i) {
    for (size_t j = i + 1; j < ops.size(); ++j) {
      const double c = commutator_residual(ops[i], ops[j]);
      if (c > commute_tol) {
        throw std::invalid_argument(
            "common_eigenbasis: operators do not commute (residual " +
            std::to_string(c) + ")");
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(0.25, 1.0);
  std::string last_reason = "unknown";

  for (int attempt = 0; attempt < kMaxComboAttempts; ++attempt) {
    Op combo = Op::Zero(dim, dim);
    for (const Op& a : ops) {
      combo += coeff(rng) * (rng() % 2 ? 1.0 : -1.0) * a;
    }
    EigResult eig;
    try {
      eig = eig_general(combo);
    } catch (const EigenvalueError& e) {
      last_reason = e.what();
      continue;
    }

    // deterministic state order: sort combination eigenvalues
    std::vector<int> order(dim);
    for (Eigen::Index k = 0; k < dim; ++k) order[k] = static_cast<int>(k);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const Complex va = eig.values(a), vb = eig.values(b);
      if (va.real() != vb.real()) return va.real() < vb.real();
      return va.imag() < vb.imag();
    });

    double vmax = 1.0;
    for (Eigen::Index k = 0; k < dim; ++k) {
      vmax = std::max(vmax, std::abs(eig.values(k)));
    }
    double min_gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < dim; ++a) {
      for (Eigen::Index b = a + 1; b < dim; ++b) {
        min_gap = std::min(min_gap, std::abs(eig.values(a) - eig.values(b)));
      }
    }
    if (min_gap / vmax < 1e-8) {
      last_reason = "combination spectrum degenerate";
      continue;
    }

    CommonEigenbasis out;
    out.basis.resize(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      out.basis.col(k) = eig.right_vectors.col(order[k]);
    }
    Eigen::PartialPivLU<Op> lu(out.basis);
    out.basis_inverse = lu.inverse();

    out.offdiag_residual = 0.0;
    out.diagonals.clear();
    bool clean = true;
    for (const Op& a : ops) {
      const Op t = out.basis_inverse * a * out.basis;
      double off = 0.0;
      for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
          if (r != c) off = std::max(off, std::abs(t(r, c)));
        }
      }
      const double rel = off / std::max(a.norm(), kTiny);
      out.offdiag_residual = std::max(out.offdiag_residual, rel);
      if (rel > commute_tol) {
        clean = false;
        break;
      }
      out.diagonals.push_back(t.diagonal());
    }
    if (!clean) {
      last_reason = "off-diagonal leakage after transformation";
      continue;
    }
    return out;
  }
  throw DegeneracyError("common_eigenbasis: " + last_reason +
                        " after " + std::to_string(kMaxComboAttempts) +
                        " attempts");
}

std::vector<Complex> transfer_sample_points(const ChainSpec& spec) {
  const int count = 2 * spec.num_sites + 4;
  const double radius = 1.0 + spec.max_theta_mag() + std::abs(spec.eta);
  std::vector<Complex> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double phi = 2.0 * M_PI * (k + 0.13) / count;
    pts.push_back(-spec.eta / 2.0 +
                  radius * Complex(std::cos(phi), std::sin(phi)));
  }
  return pts;
}

std::vector<Op> sample_transfer(const ChainSpec& spec, const OpenBoundary& b,
                                const std::vector<Complex>& points) {
  std::vector<Op> taus;
  taus.reserve(points.size());
  for (const Complex& u : points) {
    taus.push_back(transfer_matrix(u, spec, b));
  }
  return taus;
}

std::vector<LambdaPoly> lambda_polys_from_transfer(
    const ChainSpec& spec, const OpenBoundary& b,
    const CommonEigenbasis& basis, const std::vector<Complex>& points) {
  const int degree = 2 * spec.num_sites + 2;
  if (static_cast<int>(points.size()) < degree + 2) {
    throw std::invalid_argument(
        "lambda_polys_from_transfer: need 2N+4 sample points");
  }
  if (basis.diagonals.size() != points.size()) {
    throw std::invalid_argument(
        "lambda_polys_from_transfer: basis/point count mismatch");
  }
  (void)b;
  const Eigen::Index dim = spec.dim();
  std::vector<LambdaPoly> out;
  out.reserve(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    std::vector<std::pair<Complex, Complex>> samples;
    samples.reserve(points.size());
    for (size_t k = 0; k < points.size(); ++k) {
      samples.emplace_back(points[k], basis.diagonals[k](s));
    }
    PolyFit fit = poly_interp(samples, degree);  // DegreeError on misfit
    LambdaPoly lp;
    lp.state_index = static_cast<int>(s);
    lp.poly = std::move(fit.poly);
    lp.source = LambdaSource::kExactDiag;
    if (lp.poly.degenerate()) {
      throw DegreeError(
          "lambda_polys_from_transfer: leading coefficient vanished", 0.0);
    }
    out.push_back(std::move(lp));
  }
  return out;
}

std::vector<Eigen::VectorXcd> gaudin_exact_spectrum(const ChainSpec& spec,
                                                    const GaudinBoundary& g,
                                                    std::uint64_t seed) {
  std::vector<Op> hams;
  hams.reserve(spec.num_sites);
  for (int j = 1; j <= spec.num_sites; ++j) {
    hams.push_back(hamiltonian(j, spec, g));
  }
  CommonEigenbasis basis = common_eigenbasis(hams, seed);
  const Eigen::Index dim = spec.dim();
  std::vector<Eigen::VectorXcd> tuples(dim,
                                       Eigen::VectorXcd(spec.num_sites));
  for (Eigen::Index s = 0; s < dim; ++s) {
    for (int j = 0; j < spec.num_sites; ++j) {
      tuples[s](j) = basis.diagonals[j](s);
    }
  }
  return tuples;
}

SpectrumReport match_spectra(const std::vector<BetheSolutionRecord>& bethe,
                             const std::vector<Eigen::VectorXcd>& exact,
                             double tol) {
  SpectrumReport rep;
  rep.tol = tol;
  rep.total_states = static_cast<int>(exact.size());
  if (exact.empty()) return rep;
  const Eigen::Index n = exact[0].size();

  // per-operator spectral scales for the relative error
  Eigen::VectorXd scale = Eigen::VectorXd::Constant(n, kTiny);
  for (const auto& e : exact) {
    for (Eigen::Index j = 0; j < n; ++j) {
      scale(j) = std::max(scale(j), std::abs(e(j)));
    }
  }
  auto distance = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    double d = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      d = std::max(d, std::abs(a(j) - b(j)) / scale(j));
    }
    return d;
  };

  rep.states.resize(exact.size());
  for (size_t k = 0; k < exact.size(); ++k) {
    rep.states[k].exact_index = static_cast<int>(k);
    rep.states[k].exact_energies = exact[k];
  }

  std::vector<bool> bethe_used(bethe.size(), false);
  std::vector<bool> exact_used(exact.size(), false);
  while (true) {
    double best = std::numeric_limits<double>::infinity();
    int bi = -1, ei = -1;
    for (size_t i = 0; i < bethe.size(); ++i) {
      if (bethe_used[i]) continue;
      for (size_t k = 0; k < exact.size(); ++k) {
        if (exact_used[k]) continue;
        const double d = distance(bethe[i].energies, exact[k]);
        if (d < best) {
          best = d;
          bi = static_cast<int>(i);
          ei = static_cast<int>(k);
        }
      }
    }
    if (bi < 0 || best > tol) break;
    bethe_used[bi] = true;
    exact_used[ei] = true;
    rep.states[ei].bethe_index = bi;
    rep.states[ei].rel_err = best;
    rep.states[ei].bae_residual = bethe[bi].roots.residual_norm;
    rep.matched_count += 1;
    rep.max_err = std::max(rep.max_err, best);
  }
  for (size_t i = 0; i < bethe.size(); ++i) {
    if (!bethe_used[i]) rep.unmatched_bethe.push_back(static_cast<int>(i));
  }
  return rep;
}

}  // namespace odba
