// spectra.hpp — simultaneous diagonalization of commuting families, per-state
// eigenvalue polynomials of the transfer matrix, the exact Gaudin joint
// spectrum, and Bethe-vs-exact multiset matching.

#pragma once

#include <cstdint>
#include <vector>

#include "odba/roots.hpp"

namespace odba {

// ------------------------- simultaneous diagonalization ---------------------

struct CommonEigenbasis {
  Op basis;          // columns: joint eigenvectors
  Op basis_inverse;
  std::vector<Eigen::VectorXcd> diagonals;  // per input operator
  double offdiag_residual;  // worst off-diagonal magnitude after transforming
};

// Diagonalizes a random real linear combination of the (pairwise commuting)
// operators and transforms each one into that basis. Re-randomizes on
// detected degeneracy (up to 5 attempts), then throws DegeneracyError.
CommonEigenbasis common_eigenbasis(const std::vector<Op>& ops,
                                   std::uint64_t seed = 0x9e3779b97f4a7c15ULL,
                                   double commute_tol = 1e-8);

// ------------------------- transfer-matrix eigenvalues ----------------------

// 2N+4 generic sample points on a circle centred at the crossing-symmetric
// point -eta/2 (symmetric under u -> -u-eta, well conditioned for fitting)
std::vector<Complex> transfer_sample_points(const ChainSpec& spec);

std::vector<Op> sample_transfer(const ChainSpec& spec, const OpenBoundary& b,
                                const std::vector<Complex>& points);

// Per-state eigenvalue polynomials of tau(u), interpolated through the
// diagonals of a common eigenbasis of the samples.
std::vector<LambdaPoly> lambda_polys_from_transfer(
    const ChainSpec& spec, const OpenBoundary& b,
    const CommonEigenbasis& basis, const std::vector<Complex>& points);

// ------------------------------ gaudin spectrum ------------------------------

// Joint spectrum of {H_j}: for each of the 2^N common eigenstates, the
// N-tuple of H_j eigenvalues. spec.eta is ignored (Gaudin limit).
std::vector<Eigen::VectorXcd> gaudin_exact_spectrum(const ChainSpec& spec,
                                                    const GaudinBoundary& g,
                                                    std::uint64_t seed =
                                                        0x9e3779b97f4a7c15ULL);

// ------------------------------ spectrum matching ---------------------------

struct BetheSolutionRecord {
  BetheRoots roots;
  Eigen::VectorXcd energies;
};

struct MatchedState {
  int exact_index = -1;
  Eigen::VectorXcd exact_energies;
  int bethe_index = -1;  // -1 when unmatched
  double rel_err = std::numeric_limits<double>::quiet_NaN();
  double bae_residual = std::numeric_limits<double>::quiet_NaN();
};

struct SpectrumReport {
  std::vector<MatchedState> states;  // one per exact state
  std::vector<int> unmatched_bethe;  // bethe solutions left unpaired
  int matched_count = 0;
  int total_states = 0;
  double max_err = 0.0;  // over matched states
  double tol = 0.0;
};

// Greedy minimal-distance matching on energy tuples; the distance is the
// max over sites of the per-site error relative to that operator's spectral
// scale. Each exact tuple is matched at most once.
SpectrumReport match_spectra(const std::vector<BetheSolutionRecord>& bethe,
                             const std::vector<Eigen::VectorXcd>& exact,
                             double tol);

}  // namespace odba
