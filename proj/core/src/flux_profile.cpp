#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

#include "mplab/zeromodes.hpp"

namespace mplab {

namespace {
using boost::math::quadrature::gauss_kronrod;
using GK = gauss_kronrod<double, 31>;

double bump(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

// omega-density against dx dy
inline double omega_density(double r) {
  const double q = 1.0 + 0.25 * r * r;
  return 0.25 / (q * q);
}
} // namespace

HopfValue hopf_map(double x1, double x2, double x3) {
  const complexd w(x1, x2);
  if (std::abs(x1) + std::abs(x2) == 0.0) return {complexd(0.0, 0.0), true};
  const double r2 = x1 * x1 + x2 * x2 + x3 * x3;
  return {2.0 * complexd(x3, -1.0 + 0.25 * r2) / w, false};
}

double hopf_one_plus_quarter_sq(double x1, double x2, double x3) {
  const double rho2 = x1 * x1 + x2 * x2;
  if (rho2 == 0.0) return std::numeric_limits<double>::infinity();
  const double q = 1.0 + 0.25 * (rho2 + x3 * x3);
  return q * q / rho2;
}

double FluxProfile::g(double r) const { return amplitude * bump(r / support_radius); }

double FluxProfile::mu(double r) const { return (g(r) - 1.0) * omega_density(r); }

FluxProfile make_flux_profile(int m, double support_radius) {
  if (m < 1) throw std::invalid_argument("make_flux_profile: m must be a positive integer");
  if (!(support_radius > 0.0))
    throw std::invalid_argument("make_flux_profile: support radius must be positive");
  FluxProfile p;
  p.m = m;
  p.support_radius = support_radius;
  const double base = GK::integrate(
      [&](double r) { return bump(r / support_radius) * omega_density(r) * r; }, 0.0,
      support_radius, 12, 1e-13);
  p.amplitude = (m + 0.5) / base;
  p.flux = p.amplitude * base;
  return p;
}

namespace {

// angular factor: integral over the circle of ln|z - r' e^{i phi}|^2, i.e.
// 2 * int_0^pi ln(a^2 + b^2 - 2ab cos u) du, done numerically (no
// mean-value shortcut; the radial closed form stays a test-side oracle)
double log_circle_integral(double a, double b, double rel_tol) {
  auto f = [&](double u) {
    const double q = a * a + b * b - 2.0 * a * b * std::cos(u);
    return std::log(std::max(q, 1e-300));
  };
  // the integrand is log-singular at u = 0 when a == b; keep that endpoint
  // inside a short panel where the adaptive rule can refine
  const double split = 0.25;
  const double part1 = GK::integrate(f, 0.0, split, 15, rel_tol);
  const double part2 = GK::integrate(f, split, M_PI, 15, rel_tol);
  return 2.0 * (part1 + part2);
}

} // namespace

double log_potential(const FluxProfile& p, complexd z, double rel_tol) {
  const double rg = p.support_radius;
  const double a = std::abs(z);

  auto radial = [&](double rp) {
    return rp * p.mu(rp) * log_circle_integral(a, rp, rel_tol);
  };

  // near field over the flux support, split at the singular ring r' = |z|
  double near = 0.0;
  if (a > 0.0 && a < rg) {
    near = GK::integrate(radial, 0.0, a, 15, rel_tol) +
           GK::integrate(radial, a, rg, 15, rel_tol);
  } else {
    near = GK::integrate(radial, 0.0, rg, 15, rel_tol);
  }

  // far tail of the -omega density, inverted radial variable; another split
  // at the ring when |z| lies beyond the support
  auto radial_inv = [&](double u) {
    const double rp = 1.0 / u;
    return radial(rp) / (u * u);
  };
  double far = 0.0;
  if (a > rg) {
    far = GK::integrate(radial_inv, 1e-9, 1.0 / a, 15, rel_tol) +
          GK::integrate(radial_inv, 1.0 / a, 1.0 / rg, 15, rel_tol);
  } else {
    far = GK::integrate(radial_inv, 1e-9, 1.0 / rg, 15, rel_tol);
  }

  return (near + far) / M_PI;
}

} // namespace mplab
