#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mplab/fields.hpp"

namespace mplab {

/// Stereographic Hopf coordinate 2(x3 + i(-1+|x|^2/4))/(x1+i x2); the
/// x1+ix2 = 0 axis maps to the point at infinity.
struct HopfValue {
  complexd value;
  bool at_infinity = false;
};
HopfValue hopf_map(double x1, double x2, double x3);

/// Identity (1+|Phi|^2/4) = (1+|x|^2/4)^2/(x1^2+x2^2); returns the left side
/// evaluated stably (infinite on the axis).
double hopf_one_plus_quarter_sq(double x1, double x2, double x3);

/// Smooth radial flux density g(r) = amplitude * exp(1 - 1/(1-(r/r_g)^2)) on
/// r < r_g, amplitude solved so (2 pi)^{-1} integral g omega = m + 1/2.
class FluxProfile {
public:
  FluxProfile() = default;
  int m = 1;
  double support_radius = 2.0;
  double amplitude = 0.0;
  double flux = 0.0; // recomputed (m + 1/2), a quadrature self-check

  double g(double r) const;
  /// density of beta2 = (g-1) omega against dx dy
  double mu(double r) const;
};
FluxProfile make_flux_profile(int m, double support_radius = 2.0);

/// (1/pi) integral over C of ln|z-z'|^2 (g-1) omega(z'), by genuine 2-D
/// adaptive quadrature (disc part in polar coordinates centered at z, far
/// tail through an inverted radial variable).
double log_potential(const FluxProfile& profile, complexd z, double rel_tol = 1e-9);

struct DecayCertificate {
  double constant = 0.0;           // sup over probes of |psi(x)| |x|^{m+1}
  double worst_ratio_error = 0.0;  // max |ratio-1| across radius doublings
  std::vector<double> radii;
};

/// Analytic zero-mode family: evaluators for Phi, f, xi, psi and the
/// compactly supported magnetic field, built on a radial table of the
/// logarithmic potential (2-D quadrature inside the flux support, closed
/// form beyond it). Families are cached per (m, support radius).
class ZeroModeFamily {
public:
  int m() const;
  const FluxProfile& profile() const;

  double log_potential_radial(double r) const;
  double f(complexd z) const;
  std::array<complexd, 2> xi(double x1, double x2, double x3) const;
  std::array<complexd, 2> psi(double x1, double x2, double x3) const;
  std::array<double, 3> field(double x1, double x2, double x3) const; // B = curl A
  double psi_abs(double x1, double x2, double x3) const;

  double norm_sq() const;        // integral |psi|^2 over R^3
  double field_norm_sq() const;  // integral |B|^2
  /// spherical-shell integral of |psi|^2 at radius r
  double shell_norm(double r) const;
  /// radius of the (compact) support of the magnetic field
  double field_support_radius() const;

  const DecayCertificate& decay() const;

  SpinorField sample(const Grid3& grid, double scale = 1.0) const;
  VectorField sample_field(const Grid3& grid, double scale = 1.0) const;

  /// "ZM m=<m> r_g=<r> C=<decay-estimate>"
  std::string manifest() const;

  struct Impl;
  explicit ZeroModeFamily(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

private:
  std::shared_ptr<const Impl> impl_;
};

ZeroModeFamily build_zero_mode(int m, const FluxProfile& profile);
ZeroModeFamily build_zero_mode(int m);

struct RecoveredPotential {
  VectorField A;
  double residual = 0.0;  // interior relative Dirac residual with this A
  int excluded_nodes = 0; // near-vanishing psi nodes left out of the fit
  double min_abs_psi = 0.0;
};

/// Pointwise recovery A = -h |psi|^{-2} (Im<psi, grad psi> + curl<psi, sigma
/// psi>/2); the sign convention is pinned by the pure-gauge case psi =
/// exp(i phi) chi0 recovering A = -h grad phi.
RecoveredPotential recover_vector_potential(const SpinorField& psi, double h,
                                            double exclusion_threshold = 1e-14);

/// Interior relative norm of sigma.(-ih grad + A) psi with central
/// differences (one boundary layer trimmed).
double dirac_residual(const SpinorField& psi, const VectorField& A, double h);

// --- localized low-energy trial states -------------------------------------

struct TrialStateParams {
  double delta = 0.1;
  double beta = 1.0;
  double h = 1.0;
  double R = 1.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  int local_n = 24; // sampling resolution of the local fields
};

struct TrialState {
  Grid3 grid = Grid3(8, 1.0);      // local grid in ball-centered coordinates
  std::array<double, 3> center{};
  SpinorField psi{grid};           // normalized cutoff state
  VectorField A{grid};             // scaled vector potential on the local grid
  VectorField B{grid};             // scaled field, supported in the ball
  int m = 0;
  double R = 0.0, ell = 0.0, delta = 0.0, beta = 0.0, h = 0.0;
  double norm_sq_cutoff = 0.0;     // N^2 before renormalization
  double kinetic = 0.0;            // h^2 N^-2 int |grad chi_R|^2 |psi_ell|^2
  double field_term = 0.0;         // beta int B_ell^2
  double energy = 0.0;             // kinetic + field_term (V not included)
  double energy_discrete = 0.0;    // discrete Pauli form + field quadrature
  bool fallback_zero_field = false;
};

TrialState build_trial_state(const ZeroModeFamily& mode, const TrialStateParams& p);
/// Picks m = ceil(1/(2 delta)) and the cached default-profile family.
TrialState build_trial_state(const TrialStateParams& p);

/// C-infinity cutoff: 1 on [0,1/2], 0 on [1,inf).
double cutoff_chi(double t);
double cutoff_chi_prime(double t);

// --- ball packing upper bound ----------------------------------------------

struct PackedBall {
  std::array<double, 3> center{};
  double R = 0.0, ell = 0.0;
  double kinetic_field = 0.0; // kinetic + beta field energy of the ball state
  double vmean = 0.0;         // <psi, V psi>
  double energy = 0.0;        // kinetic_field - vmean
  double cube_vmin = 0.0;
};

struct PackResult {
  double upper_bound = 0.0; // sum of ball energies; a variational bound on E
  std::vector<PackedBall> balls;
  int strong_cubes = 0;
  int weak_cubes = 0;
  double kappa2 = 0.0;
  int m = 0;
  double delta = 0.0;
  bool used_weyl_fallback = false; // no strong cube: A = 0 bound instead
};

struct PackOptions {
  int local_n = 20;       // resolution of the per-R state profile
  int vavg_points = 7;    // per-axis quadrature points for <V> per ball
  int max_balls = 2000000;
};

PackResult pack_trial_projector(const ScalarField& V, double beta, double h, double eps,
                                const PackOptions& opts = {});

/// kappa2 for the ball radius rule, calibrated once per eps by bisection on
/// a reference configuration until every ball passes kinetic+field <=
/// V_min/2; values are cached.
double calibrate_kappa2(double eps);

/// Materialize the trial state of one packed ball (for audits).
TrialState materialize_ball(const PackedBall& ball, double beta, double h, double delta,
                            int local_n = 24);

// --- scaling probe for the critical Coulomb coupling ------------------------

struct InstabilityReport {
  std::vector<double> ell, energy, kinetic, potential, field;
  double slope = 0.0;      // fitted coefficient of 1/ell
  double intercept = 0.0;
  double r2 = 0.0;
  double c1 = 0.0;         // field coefficient: field*ell/(beta h^2)
  double c2 = 0.0;         // attraction coefficient: potential*ell/c
  double kinetic_max = 0.0;
  bool fit_ok = false;
};

/// Scaled closed-form zero mode against V = c/|x| (capped at c/a on the
/// grid): e(ell) = (beta h^2 C1 - c C2)/ell with an exactly vanishing
/// kinetic term. Evaluated by quadrature on the supplied grid.
InstabilityReport instability_probe(double c, double beta, double h,
                                    const std::vector<double>& ell_list, const Grid3& grid);

} // namespace mplab
