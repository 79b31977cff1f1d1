#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>

namespace mplab {

/// Applies the operator to each column of `in`, writing `out` (same shape).
using BlockOperator =
    std::function<void(const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out)>;

struct LobpcgOptions {
  double tol = 1e-8;       // convergence: ||Hx - lambda x|| <= tol*|lambda| + tol
  int max_iterations = 400;
  std::uint64_t seed = 20240901;
  /// columns whose Ritz value lies at or above this level act as guards and
  /// only need guard_tol accuracy (they certify that nothing was missed
  /// below the level, not their own eigenvalues)
  double guard_level = std::numeric_limits<double>::infinity();
  double guard_tol = 1e-4;
  /// absolute residual floor from roundoff; reaching it counts as converged
  double floor_resid = 0.0;
  /// stop when the worst relevant residual has not halved for this many
  /// iterations (reported as converged only if every target met its bound)
  int stagnation_window = 60;
};

struct LobpcgReport {
  Eigen::VectorXd eigenvalues;    // ascending, nev entries
  Eigen::MatrixXcd eigenvectors;  // dim x nev, orthonormal (plain l2)
  Eigen::VectorXd residuals;
  int iterations = 0;
  bool converged = false;
};

/// Locally optimal block preconditioned CG for the lowest `nev` eigenpairs of
/// a Hermitian operator, orthogonal to the optional `locked` block.
/// `precond`, when given, should approximate the inverse of (H - sigma) for a
/// shift below the wanted spectrum and must be Hermitian positive definite.
LobpcgReport lobpcg_lowest(const BlockOperator& H, std::size_t dim, int nev,
                           const LobpcgOptions& opts,
                           const BlockOperator* precond = nullptr,
                           const Eigen::MatrixXcd* locked = nullptr,
                           const Eigen::MatrixXcd* warm_start = nullptr);

} // namespace mplab
