#pragma once

#include <optional>

#include "mplab/fields.hpp"

namespace mplab {

enum class OperatorKind { Schrodinger, Pauli };

/// Per-link hopping phases theta_j(x) = (a/h) * (A_j(x) + A_j(x+a e_j))/2,
/// stored as the forward multiplier exp(+i theta). The forward/backward
/// phase pairing keeps the operator Hermitian and exactly covariant under
/// lattice gauge shifts theta_j(x) += (eta(x+a e_j) - eta(x))/h.
class LinkPhases {
public:
  LinkPhases(const Grid3& grid, const VectorField& A, double h);
  /// A == 0: all phases one.
  explicit LinkPhases(const Grid3& grid);

  const Grid3& grid() const { return grid_; }
  complexd forward(std::size_t node, int axis) const { return u_[3 * node + axis]; }
  bool trivial() const { return trivial_; }

  /// Exact lattice gauge shift by a node function eta.
  void gauge_shift(const ScalarField& eta, double h);

private:
  Grid3 grid_;
  std::vector<complexd> u_;
  bool trivial_;
};

/// Matrix-free discretization of (-ih grad + A)^2 - V, plus h sigma.B for
/// the Pauli variant, with Dirichlet outside the box. States are complex
/// node vectors with 1 (Schrodinger) or 2 (Pauli) components.
class HamiltonianSpec {
public:
  HamiltonianSpec(OperatorKind kind, double h, ScalarField V,
                  std::optional<VectorField> A);

  OperatorKind kind() const { return kind_; }
  double h() const { return h_; }
  const Grid3& grid() const { return V_.grid(); }
  const ScalarField& potential() const { return V_; }
  const std::optional<VectorField>& vector_potential() const { return A_; }
  const VectorField& magnetic_field() const { return B_; }
  const LinkPhases& phases() const { return phases_; }
  int components() const { return kind_ == OperatorKind::Pauli ? 2 : 1; }
  std::size_t dimension() const { return components() * grid().node_count(); }

  /// out = H in; `in`/`out` are dimension()-long arrays, component-major per
  /// node. Pure and reentrant; out must not alias in.
  void apply(const complexd* in, complexd* out) const;

  /// Applies H to a spinor field (Pauli operators only).
  SpinorField apply(const SpinorField& psi) const;

  /// Spec with link phases gauge-shifted by eta (exact lattice transform;
  /// the stored A is unchanged and no longer matches the phases).
  HamiltonianSpec gauge_shifted(const ScalarField& eta) const;

  /// Crude upper bound on the spectrum, used for solver shifts.
  double spectral_upper_bound() const;

private:
  OperatorKind kind_;
  double h_;
  ScalarField V_;
  std::optional<VectorField> A_;
  VectorField B_;
  LinkPhases phases_;
};

/// max over `trials` random pairs of |<phi,H psi> - conj(<psi,H phi>)| /
/// (|phi| |psi|), plain l2.
double hermiticity_check(const HamiltonianSpec& spec, int trials, std::uint64_t seed = 12345);

} // namespace mplab
