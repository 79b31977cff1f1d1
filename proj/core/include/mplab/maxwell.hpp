#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mplab/spectrum.hpp"

namespace mplab {

/// Current normalization frozen by the finite-difference audit: the total
/// energy is stationary exactly when 2*beta*curl(curl A) = kCurrentNormalization * J.
inline constexpr double kCurrentNormalization = 2.0;

struct EnergyReport {
  double trace_negative = 0.0;
  double field_energy = 0.0;
  double total = 0.0;
  double beta = 0.0; // +inf means the non-magnetic case
  double h = 0.0;
  double kappa = 0.0; // beta*h
  int states = 0;
  bool converged = false;
  bool boundary_ambiguous = false;
};

struct MinimizerStep {
  int iter;
  double total;
  double trace_negative;
  double field_energy;
  double step;
  double grad_norm;
  std::string flags;
};

struct MinimizerConfig {
  int max_iters = 60;
  double grad_tol = 1e-4;           // on the W-weighted gradient norm
  double initial_step = 0.1;
  double backtrack_factor = 0.5;
  int max_backtracks = 18;
  bool coulomb_projection = false;  // project the iterate after every accepted step
  EigenSolveOptions eigen;
};

struct MinimizeResult {
  VectorField A;
  EnergyReport report;
  std::vector<MinimizerStep> log;
  bool hit_iteration_cap = false;
};

/// tr(T^{S,P}_h(A) - V)_- + beta * integral |curl A|^2. Pass beta = +inf for
/// the non-magnetic case (any supplied A is ignored).
EnergyReport total_energy(OperatorKind kind, double beta, double h, const ScalarField& V,
                          const std::optional<VectorField>& A,
                          const EigenSolveOptions& opts = {});

/// Exact discrete gradient of total_energy with respect to the node values
/// of A, expressed as a field against the trapezoid inner product:
/// g = 2*beta*W^{-1} C^T W C A - kCurrentNormalization * J_A.
/// Flagged unreliable when the spectrum is boundary-ambiguous at 0.
struct GradientResult {
  VectorField gradient;
  VectorField current;
  bool reliable = true;
};
GradientResult energy_gradient(OperatorKind kind, double beta, double h,
                               const ScalarField& V, const VectorField& A,
                               const EigenSolveOptions& opts = {});

/// Projected gradient descent with energy-decrease backtracking; returns the
/// best iterate seen. The energy log is non-increasing by construction.
MinimizeResult minimize_energy(OperatorKind kind, double beta, double h,
                               const ScalarField& V, const VectorField& seed,
                               const MinimizerConfig& config);

/// Least-squares Helmholtz projection: removes the discrete-gradient part of
/// A (conjugate gradients on G^T G). Leaves curl A bitwise unchanged and
/// annihilates pure lattice gauges to solver tolerance.
VectorField coulomb_project(const VectorField& A, double tol = 1e-10, int max_iter = 20000);

/// A' = A + gauge_gradient(eta), psi' = exp(i eta / h) psi. The gradient is
/// the link-consistent one, so spec(A') is exactly unitarily equivalent to
/// spec(A).
std::pair<VectorField, SpinorField> gauge_transform(const VectorField& A,
                                                    const ScalarField& eta,
                                                    const SpinorField& psi, double h);

/// W-weighted norm used for gradient tolerances.
double weighted_norm(const VectorField& g);

void write_minimizer_csv(const std::vector<MinimizerStep>& log, std::ostream& os);

} // namespace mplab
