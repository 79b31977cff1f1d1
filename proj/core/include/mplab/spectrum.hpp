#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "mplab/hamiltonian.hpp"

namespace mplab {

struct NegativeSpectrum {
  std::vector<double> eigenvalues; // ascending, all < threshold
  double threshold = 0.0;
  double sum_negative = 0.0;
  int count = 0;
  bool converged = false;
  double residual_max = 0.0;
  /// true when some eigenvalue sits within 10*tol of the threshold; sums and
  /// gradients across such a configuration are not trustworthy
  bool boundary_ambiguous = false;
};

/// Orthonormal eigenvectors spanning the negative subspace (plain l2).
struct SpectralProjector {
  Grid3 grid = Grid3(8, 1.0);
  int components = 1;
  Eigen::MatrixXcd vectors; // dimension x count
  std::vector<double> eigenvalues;
  std::vector<double> residuals;
  bool converged = false;
};

struct EigenSolveOptions {
  double tol = 1e-8;
  int max_iterations = 500;  // per solver round
  int initial_block = 8;
  int max_states = 512;      // hard cap on the number of located states
  std::uint64_t seed = 20240901;
  bool use_preconditioner = true;
  std::size_t dense_threshold = 4096; // dimension at or below which the dense solver runs
  const SpectralProjector* warm_start = nullptr;
};

/// All eigenvalues below zero of the spec's operator (threshold shifts are
/// the caller's business: fold mu into V). Dense solve at small dimension,
/// LOBPCG with locking above it.
NegativeSpectrum negative_spectrum(const HamiltonianSpec& spec, double tol);
std::pair<NegativeSpectrum, SpectralProjector>
negative_spectrum_full(const HamiltonianSpec& spec, const EigenSolveOptions& opts);

/// rho(x) = sum_occupied |phi(x)|^2 (spinor traced), normalized so that
/// integral rho = count.
ScalarField density(const SpectralProjector& P);

/// Gauge-covariant one-body current of the occupied states, normalized so
/// that the total-energy gradient in A is 2*beta*curl'(curl A) - 2*J
/// (see maxwell::kCurrentNormalization).
VectorField current(const SpectralProjector& P, const HamiltonianSpec& spec);

/// CSV rows: index,eigenvalue,residual
void write_eigenvalue_csv(const NegativeSpectrum& s, const SpectralProjector& P,
                          std::ostream& os);

} // namespace mplab
