#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "mplab/differential.hpp"
#include "mplab/zeromodes.hpp"

namespace mplab {

namespace {
using boost::math::quadrature::gauss_kronrod;
using GK = gauss_kronrod<double, 31>;

// natural cubic spline on a uniform knot vector
class Spline {
public:
  Spline() = default;
  Spline(double x0, double dx, std::vector<double> y) : x0_(x0), dx_(dx), y_(std::move(y)) {
    // Thomas algorithm on (1, 4, 1) m = 6 d2, natural ends
    const int n = static_cast<int>(y_.size());
    m_.assign(n, 0.0);
    std::vector<double> a(n, 1.0), b(n, 4.0), c(n, 1.0), d(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) d[i] = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (dx_ * dx_);
    b[0] = 1.0; c[0] = 0.0; d[0] = 0.0;
    a[n - 1] = 0.0; b[n - 1] = 1.0; d[n - 1] = 0.0;
    for (int i = 1; i < n; ++i) {
      const double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      d[i] -= w * d[i - 1];
    }
    m_[n - 1] = d[n - 1] / b[n - 1];
    for (int i = n - 2; i >= 0; --i) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
  }

  double operator()(double x) const {
    const int n = static_cast<int>(y_.size());
    double t = (x - x0_) / dx_;
    int i = static_cast<int>(std::floor(t));
    i = std::min(std::max(i, 0), n - 2);
    const double u = (x - (x0_ + i * dx_)) / dx_;
    const double v = 1.0 - u;
    return v * y_[i] + u * y_[i + 1] +
           dx_ * dx_ / 6.0 * ((v * v * v - v) * m_[i] + (u * u * u - u) * m_[i + 1]);
  }

private:
  double x0_ = 0.0, dx_ = 1.0;
  std::vector<double> y_, m_;
};

std::array<double, 3> omega_field(double x1, double x2, double x3) {
  const double q = x1 * x1 + x2 * x2 + x3 * x3 + 4.0;
  const double q3 = q * q * q;
  return {32.0 * (x1 * x3 - 2.0 * x2) / q3, 32.0 * (2.0 * x1 + x2 * x3) / q3,
          16.0 * (4.0 + x3 * x3 - x1 * x1 - x2 * x2) / q3};
}

} // namespace

struct ZeroModeFamily::Impl {
  FluxProfile profile;
  Spline h_inside;        // log potential on [0, r_g]
  double mass_core = 0.0; // 2 pi int_0^rg mu r dr
  double norm_sq = 0.0;
  double field_norm_sq = 0.0;
  double f_at_infinity = 0.0;
  DecayCertificate decay;

  double mass_inside(double s) const {
    // only valid for s >= r_g (tail is the closed -omega form)
    const double rg = profile.support_radius;
    const double us = 1.0 + 0.25 * s * s, ug = 1.0 + 0.25 * rg * rg;
    return mass_core + M_PI * (1.0 / us - 1.0 / ug);
  }

  double outer_log(double s) const {
    // 2 pi int_s^inf ln(r^2) (-omega) r dr for s >= r_g, closed form
    const double u0 = 0.25 * s * s;
    return -M_PI * (std::log(4.0 * u0) / (1.0 + u0) - std::log(u0 / (1.0 + u0)));
  }

  double h_radial(double r) const {
    const double rg = profile.support_radius;
    if (r <= rg) return h_inside(r);
    return (std::log(r * r) * mass_inside(r) + outer_log(r)) / M_PI;
  }

  double f_of(complexd z) const {
    const double az = std::abs(z);
    return std::sqrt(1.0 + 0.25 * az * az) * std::exp(-0.25 * h_radial(az));
  }

  std::array<complexd, 2> psi_at(double x1, double x2, double x3) const {
    const double r2 = x1 * x1 + x2 * x2 + x3 * x3;
    const double pref = 1.0 / (1.0 + 0.25 * r2);
    HopfValue F = hopf_map(x1, x2, x3);
    const double fv = F.at_infinity ? f_at_infinity : f_of(F.value);
    const double xin = pref * fv / std::sqrt(1.0 + 0.25 * r2);
    // (1 + (i/2) sigma.x)(1,0)^T = (1 + i x3/2, (i x1 - x2)/2)^T
    return {xin * complexd(1.0, 0.5 * x3), xin * complexd(-0.5 * x2, 0.5 * x1)};
  }

  std::array<double, 3> field_at(double x1, double x2, double x3) const {
    HopfValue F = hopf_map(x1, x2, x3);
    const double gv = F.at_infinity ? 0.0 : profile.g(std::abs(F.value));
    if (gv == 0.0) return {0.0, 0.0, 0.0};
    auto Om = omega_field(x1, x2, x3);
    // orientation pinned by the recovered-potential audit: curl A = -g Omega
    return {-gv * Om[0], -gv * Om[1], -gv * Om[2]};
  }
};

int ZeroModeFamily::m() const { return impl_->profile.m; }
const FluxProfile& ZeroModeFamily::profile() const { return impl_->profile; }
double ZeroModeFamily::log_potential_radial(double r) const { return impl_->h_radial(r); }
double ZeroModeFamily::f(complexd z) const { return impl_->f_of(z); }
double ZeroModeFamily::norm_sq() const { return impl_->norm_sq; }
double ZeroModeFamily::field_norm_sq() const { return impl_->field_norm_sq; }
const DecayCertificate& ZeroModeFamily::decay() const { return impl_->decay; }

double ZeroModeFamily::shell_norm(double r) const {
  auto f = [&](double c) {
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    auto p = impl_->psi_at(r * s, 0.0, r * c);
    return std::norm(p[0]) + std::norm(p[1]);
  };
  return 2.0 * M_PI * r * r * GK::integrate(f, -1.0, 1.0, 10, 1e-10);
}

double ZeroModeFamily::field_support_radius() const {
  const double rg = impl_->profile.support_radius;
  const double cs = std::sqrt(1.0 + 0.25 * rg * rg);
  return 2.0 * (cs + std::sqrt(cs * cs - 1.0));
}

std::array<complexd, 2> ZeroModeFamily::xi(double x1, double x2, double x3) const {
  const double r2 = x1 * x1 + x2 * x2 + x3 * x3;
  const double nrm = 1.0 / std::sqrt(1.0 + 0.25 * r2);
  return {nrm * complexd(1.0, 0.5 * x3), nrm * complexd(-0.5 * x2, 0.5 * x1)};
}

std::array<complexd, 2> ZeroModeFamily::psi(double x1, double x2, double x3) const {
  return impl_->psi_at(x1, x2, x3);
}

std::array<double, 3> ZeroModeFamily::field(double x1, double x2, double x3) const {
  return impl_->field_at(x1, x2, x3);
}

double ZeroModeFamily::psi_abs(double x1, double x2, double x3) const {
  auto p = impl_->psi_at(x1, x2, x3);
  return std::sqrt(std::norm(p[0]) + std::norm(p[1]));
}

SpinorField ZeroModeFamily::sample(const Grid3& grid, double scale) const {
  return SpinorField::sample(grid, [&](double x, double y, double z) {
    auto p = impl_->psi_at(x / scale, y / scale, z / scale);
    const double s = std::pow(scale, -1.5);
    return std::array<complexd, 2>{s * p[0], s * p[1]};
  });
}

VectorField ZeroModeFamily::sample_field(const Grid3& grid, double scale) const {
  return VectorField::sample(grid, [&](double x, double y, double z) {
    auto b = impl_->field_at(x / scale, y / scale, z / scale);
    const double s = 1.0 / (scale * scale);
    return std::array<double, 3>{s * b[0], s * b[1], s * b[2]};
  });
}

std::string ZeroModeFamily::manifest() const {
  std::ostringstream os;
  os << "ZM m=" << m() << " r_g=" << impl_->profile.support_radius
     << " C=" << impl_->decay.constant;
  return os.str();
}

ZeroModeFamily build_zero_mode(int m, const FluxProfile& profile) {
  if (profile.m != m) throw std::invalid_argument("build_zero_mode: profile built for another m");
  auto impl = std::make_shared<ZeroModeFamily::Impl>();
  impl->profile = profile;
  const double rg = profile.support_radius;

  // radial table of the 2-D quadrature inside the support
  const int knots = 201;
  const double dx = rg / (knots - 1);
  std::vector<double> hv(knots);
  for (int i = 0; i < knots; ++i) hv[i] = log_potential(profile, complexd(i * dx, 0.0));
  impl->h_inside = Spline(0.0, dx, hv);

  impl->mass_core =
      2.0 * M_PI * GK::integrate([&](double r) { return profile.mu(r) * r; }, 0.0, rg, 12, 1e-13);

  // interior table must join the closed-form tail; a mismatch flags a
  // quadrature defect
  const double joint = (std::log(rg * rg) * impl->mass_inside(rg) + impl->outer_log(rg)) / M_PI;
  if (std::abs(joint - hv[knots - 1]) > 1e-6)
    throw std::runtime_error("build_zero_mode: log-potential table does not match its far field");

  // f at the image of the x3 axis: only the m = 1 family survives there
  impl->f_at_infinity = (m == 1) ? 0.5 : 0.0;

  // whole-space norms by spherical quadrature with an inverted-radius tail
  auto shell_psi = [&](double r) {
    auto f = [&](double c) {
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      auto p = impl->psi_at(r * s, 0.0, r * c); // axisymmetric modulus
      return std::norm(p[0]) + std::norm(p[1]);
    };
    return 2.0 * M_PI * r * r * GK::integrate(f, -1.0, 1.0, 10, 1e-10);
  };
  const double r_split = 4.0 * rg + 8.0;
  impl->norm_sq = GK::integrate(shell_psi, 0.0, r_split, 12, 1e-10) +
                  GK::integrate([&](double u) { return shell_psi(1.0 / u) / (u * u); }, 1e-7,
                                1.0 / r_split, 12, 1e-10);

  auto shell_b = [&](double r) {
    auto f = [&](double c) {
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      auto b = impl->field_at(r * s, 0.0, r * c);
      return b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
    };
    return 2.0 * M_PI * r * r * GK::integrate(f, -1.0, 1.0, 10, 1e-10);
  };
  // the field support is the compact shell |Phi| <= r_g
  const double cs = std::sqrt(1.0 + 0.25 * rg * rg);
  const double r_sup = 2.0 * (cs + std::sqrt(cs * cs - 1.0)) + 1.0;
  impl->field_norm_sq = GK::integrate(shell_b, 0.0, r_sup, 12, 1e-10);

  // decay certificate: |psi| |x|^{m+1} along fixed probe directions
  const std::array<std::array<double, 3>, 6> dirs{{{1, 0, 0},
                                                   {0.2, 1, 0.3},
                                                   {-0.5, 0.4, 0.8},
                                                   {0.3, -0.9, 0.5},
                                                   {1, 1, 1},
                                                   {-0.7, 0.2, -0.6}}};
  impl->decay.radii = {10.0, 20.0, 40.0, 80.0};
  double cmax = 0.0, worst = 0.0;
  for (const auto& d0 : dirs) {
    const double dn = std::sqrt(d0[0] * d0[0] + d0[1] * d0[1] + d0[2] * d0[2]);
    std::vector<double> vals;
    for (double R : impl->decay.radii) {
      const double x1 = d0[0] / dn * R, x2 = d0[1] / dn * R, x3 = d0[2] / dn * R;
      auto p = impl->psi_at(x1, x2, x3);
      const double v = std::sqrt(std::norm(p[0]) + std::norm(p[1])) * std::pow(R, m + 1);
      vals.push_back(v);
      cmax = std::max(cmax, v);
    }
    for (std::size_t i = 0; i + 1 < vals.size(); ++i)
      worst = std::max(worst, std::abs(vals[i + 1] / vals[i] - 1.0));
  }
  impl->decay.constant = cmax;
  impl->decay.worst_ratio_error = worst;
  if (worst > 0.25)
    throw std::runtime_error("build_zero_mode: decay certification failed (profile or quadrature defect)");

  return ZeroModeFamily(impl);
}

ZeroModeFamily build_zero_mode(int m) {
  static std::map<int, ZeroModeFamily> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
  }
  ZeroModeFamily fam = build_zero_mode(m, make_flux_profile(m));
  {
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(m, fam);
  }
  return fam;
}

RecoveredPotential recover_vector_potential(const SpinorField& psi, double h,
                                            double exclusion_threshold) {
  const Grid3& g = psi.grid();
  const std::size_t nn = g.node_count();

  // scalar pieces of the spinor
  std::array<ScalarField, 4> parts{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
  for (std::size_t i = 0; i < nn; ++i) {
    parts[0][i] = psi.comp(i, 0).real();
    parts[1][i] = psi.comp(i, 0).imag();
    parts[2][i] = psi.comp(i, 1).real();
    parts[3][i] = psi.comp(i, 1).imag();
  }

  // Im<psi, d_j psi> and the spin density
  VectorField im_grad(g);
  for (int axis = 0; axis < 3; ++axis) {
    std::array<ScalarField, 4> d{axis_derivative(parts[0], axis), axis_derivative(parts[1], axis),
                                 axis_derivative(parts[2], axis), axis_derivative(parts[3], axis)};
    for (std::size_t i = 0; i < nn; ++i) {
      // Im(conj(u) du) = Re(u) Im(du) - Im(u) Re(du), both components
      im_grad.comp(i, axis) = parts[0][i] * d[1][i] - parts[1][i] * d[0][i] +
                              parts[2][i] * d[3][i] - parts[3][i] * d[2][i];
    }
  }

  VectorField spin(g);
  for (std::size_t i = 0; i < nn; ++i) {
    const complexd up = psi.comp(i, 0), dn = psi.comp(i, 1);
    const complexd cross = std::conj(up) * dn;
    spin.comp(i, 0) = 2.0 * cross.real();
    spin.comp(i, 1) = 2.0 * cross.imag();
    spin.comp(i, 2) = std::norm(up) - std::norm(dn);
  }
  VectorField curl_spin = curl(spin);

  double max2 = 0.0;
  for (std::size_t i = 0; i < nn; ++i)
    max2 = std::max(max2, std::norm(psi.comp(i, 0)) + std::norm(psi.comp(i, 1)));

  RecoveredPotential out{VectorField(g), 0.0, 0, std::sqrt(max2)};
  double min2 = max2;
  for (std::size_t i = 0; i < nn; ++i) {
    const double n2 = std::norm(psi.comp(i, 0)) + std::norm(psi.comp(i, 1));
    min2 = std::min(min2, n2);
    if (n2 <= exclusion_threshold * max2) {
      ++out.excluded_nodes;
      continue;
    }
    for (int c = 0; c < 3; ++c)
      out.A.comp(i, c) = -h * (im_grad.comp(i, c) + 0.5 * curl_spin.comp(i, c)) / n2;
  }
  out.min_abs_psi = std::sqrt(min2);
  out.residual = dirac_residual(psi, out.A, h);
  return out;
}

double dirac_residual(const SpinorField& psi, const VectorField& A, double h) {
  require_same_grid(psi.grid(), A.grid(), "dirac_residual");
  const Grid3& g = psi.grid();
  const int n = g.n();
  const double inv2a = 1.0 / (2.0 * g.spacing());

  double res2 = 0.0, ref2 = 0.0;
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j)
      for (int i = 1; i < n - 1; ++i) {
        const std::size_t idx = g.index(i, j, k);
        complexd dpsi[3][2];
        const long step[3] = {1, n, static_cast<long>(n) * n};
        for (int axis = 0; axis < 3; ++axis)
          for (int c = 0; c < 2; ++c)
            dpsi[axis][c] = (psi.comp(idx + step[axis], c) - psi.comp(idx - step[axis], c)) * inv2a;
        complexd pi[3][2];
        for (int axis = 0; axis < 3; ++axis)
          for (int c = 0; c < 2; ++c)
            pi[axis][c] = complexd(0.0, -h) * dpsi[axis][c] + A.comp(idx, axis) * psi.comp(idx, c);
        // sigma contraction
        const complexd r0 = pi[0][1] + complexd(0.0, -1.0) * pi[1][1] + pi[2][0];
        const complexd r1 = pi[0][0] + complexd(0.0, 1.0) * pi[1][0] - pi[2][1];
        res2 += std::norm(r0) + std::norm(r1);
        ref2 += std::norm(psi.comp(idx, 0)) + std::norm(psi.comp(idx, 1));
      }
  return (ref2 > 0.0) ? std::sqrt(res2 / ref2) : 0.0;
}

} // namespace mplab
