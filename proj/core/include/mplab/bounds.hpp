#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mplab/fields.hpp"
#include "mplab/hamiltonian.hpp"

namespace mplab {

struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  /// smallest constant that makes the inequality hold when the universal
  /// constant is unspecified; measured, not a literature value
  double empirical_constant = 0.0;
  std::vector<double> per_sample_slack;
};

/// Phase-space (Weyl) value of the rescaled trace: -c * integral [V]_+^{5/2}
/// with c = 1/(15 pi^2) for Schrodinger, 2/(15 pi^2) for Pauli.
double weyl_value(const ScalarField& V, OperatorKind kind);

struct TwoTermBound {
  double term_potential = 0.0; // C=1 structural value of the [V]_+ term
  double term_field = 0.0;     // C=1 structural value of the field/kappa term
  double value = 0.0;          // -(term_potential + term_field)
};

/// Structural right-hand side of the magnetic trace inequality:
/// -C [ h^-3 int [V]_+^{5/2} + (h^-2 int B^2)^{3/4} (int [V]_+^4)^{1/4} ], C=1.
TwoTermBound lieb_thirring_rhs(const ScalarField& V, const VectorField& B, double h);

/// Structural lower bound in rescaled units: h^3 E >= -C int[V]^{5/2}
/// - C (beta h)^-3 int [V]^4, evaluated with C=1.
TwoTermBound stability_lower(const ScalarField& V, double beta, double h);

/// Lowest `count` levels of e(n1,n2,n3) = (n1+n2+1) sqrt(1+B^2) + n3 + 1/2
/// + (n1-n2) B, ascending with multiplicity.
std::vector<double> oscillator_levels(double B, int count);

/// sum of (e - 5/2)_- over the oscillator levels; closed form
/// 3 sqrt(1+B^2) - 4 - B inside its two-level validity window B <= 4/3,
/// level arithmetic outside it.
double oscillator_negative_sum(double B);
/// The closed form is exact iff exactly (0,0,0) and (0,1,0) lie below 5/2.
bool oscillator_closed_form_valid(double B);

struct LtSample {
  double h = 1.0;
  double int_v52 = 0.0;   // integral [V]_+^{5/2}
  double int_v4 = 0.0;    // integral [V]_+^4
  double int_b2 = 0.0;    // integral |B|^2
  double trace = 0.0;     // computed tr[...]_-
};

/// Smallest C making trace >= -C (h^-3 int V^{5/2} + (h^-2 int B^2)^{3/4}
/// (int V^4)^{1/4}) across all samples; positive traces are flagged through
/// zero slack entries.
BoundReport check_lt_constant(const std::vector<LtSample>& samples);

void write_bound_csv(const std::vector<BoundReport>& reports, std::ostream& os);

} // namespace mplab
