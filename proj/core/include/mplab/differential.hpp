#pragma once

#include "mplab/fields.hpp"

namespace mplab {

/// Second-order axis derivative: central differences at interior nodes,
/// one-sided three-point stencils on the boundary faces. The per-axis
/// operators commute exactly, so curl(gradient(.)) == 0 and
/// divergence(curl(.)) == 0 hold to roundoff, not just to O(a^2).
ScalarField axis_derivative(const ScalarField& f, int axis);

VectorField gradient(const ScalarField& f);
VectorField curl(const VectorField& A);
ScalarField divergence(const VectorField& A);

/// Transpose (plain l2 adjoint) of axis_derivative; needed by the exact
/// energy gradient and the least-squares Helmholtz projection.
ScalarField axis_derivative_transpose(const ScalarField& f, int axis);

/// G^T A  = sum_j D_j^T A_j (negative weak divergence).
ScalarField gradient_transpose(const VectorField& A);

/// C^T u with C the discrete curl above; equals curl up to boundary closures.
VectorField curl_transpose(const VectorField& u);

/// Discrete gradient of eta that is consistent with link-midpoint averaging:
/// the returned G satisfies (G_j(x) + G_j(x + a e_j))/2 = (eta(x+a e_j) -
/// eta(x))/a on every link, exactly. Adding it to a vector potential shifts
/// the induced link phases by the exact lattice gauge term, which makes
/// spectra invariant to roundoff. Per line the underdetermined degree of
/// freedom is fixed by the least-norm solution.
VectorField gauge_gradient(const ScalarField& eta);

} // namespace mplab
