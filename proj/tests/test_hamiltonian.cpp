#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "mplab/differential.hpp"
#include "mplab/hamiltonian.hpp"
#include "mplab/lab.hpp"

using namespace mplab;

TEST_CASE("discrete sine modes are exact eigenfunctions at A=0, V=0") {
  const int n = 12;
  Grid3 g(n, 1.5);
  const double h = 0.7;
  HamiltonianSpec spec(OperatorKind::Schrodinger, h, ScalarField(g), std::nullopt);

  const int m1 = 2, m2 = 1, m3 = 3;
  std::vector<complexd> psi(g.node_count()), out(g.node_count());
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        psi[g.index(i, j, k)] = std::sin(M_PI * m1 * (i + 1) / (n + 1)) *
                                std::sin(M_PI * m2 * (j + 1) / (n + 1)) *
                                std::sin(M_PI * m3 * (k + 1) / (n + 1));
  spec.apply(psi.data(), out.data());

  const double a = g.spacing();
  auto sym = [&](int m) { return (2.0 - 2.0 * std::cos(M_PI * m / (n + 1))) / (a * a); };
  const double lambda = h * h * (sym(m1) + sym(m2) + sym(m3));
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    num += std::norm(out[i] - lambda * psi[i]);
    den += std::norm(psi[i]);
  }
  CHECK(std::sqrt(num / den) <= 1e-10);
}

TEST_CASE("hermiticity for trivial, constant-field and random phases") {
  Grid3 g(10, 2.0);
  ScalarField V = random_smooth_scalar(g, 2);
  CHECK(hermiticity_check(HamiltonianSpec(OperatorKind::Schrodinger, 1.0, V, std::nullopt), 3) <=
        1e-12);

  VectorField Ac = VectorField::sample(g, [](double x, double y, double) {
    return std::array<double, 3>{-0.5 * y, 0.5 * x, 0.0};
  });
  CHECK(hermiticity_check(HamiltonianSpec(OperatorKind::Pauli, 1.0, V, Ac), 3) <= 1e-12);

  VectorField Ar = random_interior_vector(g, 7, 1.5);
  CHECK(hermiticity_check(HamiltonianSpec(OperatorKind::Schrodinger, 0.5, V, Ar), 3) <= 1e-12);
}

TEST_CASE("dense transpose oracle at n=8") {
  Grid3 g(8, 1.0);
  ScalarField V = random_smooth_scalar(g, 13);
  VectorField A = random_interior_vector(g, 14, 1.0);
  HamiltonianSpec spec(OperatorKind::Pauli, 0.8, V, A);
  const std::size_t dim = spec.dimension();
  Eigen::MatrixXcd H(dim, dim);
  std::vector<complexd> e(dim, complexd(0.0)), col(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    e[j] = 1.0;
    spec.apply(e.data(), col.data());
    e[j] = 0.0;
    for (std::size_t i = 0; i < dim; ++i) H(i, j) = col[i];
  }
  CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("exact lattice gauge covariance of apply") {
  Grid3 g(10, 1.5);
  const double h = 0.6;
  ScalarField V = random_smooth_scalar(g, 23);
  VectorField A = random_interior_vector(g, 24, 0.8);
  ScalarField eta = random_smooth_scalar(g, 25, 1.3);

  HamiltonianSpec spec(OperatorKind::Schrodinger, h, V, A);
  VectorField Ap = A;
  Ap += gauge_gradient(eta);
  HamiltonianSpec specp(OperatorKind::Schrodinger, h, V, Ap);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  std::vector<complexd> psi(g.node_count()), lhs(g.node_count()), rhs(g.node_count()),
      tmp(g.node_count());
  for (auto& v : psi) v = complexd(gauss(rng), gauss(rng));

  // H(A + grad eta) (e^{i eta/h} psi) = e^{i eta/h} H(A) psi
  for (std::size_t i = 0; i < psi.size(); ++i) tmp[i] = std::polar(1.0, eta[i] / h) * psi[i];
  specp.apply(tmp.data(), lhs.data());
  spec.apply(psi.data(), rhs.data());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    num += std::norm(lhs[i] - std::polar(1.0, eta[i] / h) * rhs[i]);
    den += std::norm(rhs[i]);
  }
  CHECK(std::sqrt(num / den) <= 1e-12);
}

TEST_CASE("continuum consistency at second order") {
  // fixed smooth V, A, psi with the analytic image of
  // (-ih grad + A)^2 psi - V psi + h sigma.B psi
  const double h = 0.9;
  auto Vf = [](double x, double y, double z) { return std::cos(x) * std::cos(y) * std::cos(z); };
  auto Af = [](double x, double y, double z) {
    return std::array<double, 3>{std::sin(y), std::sin(z), std::sin(x)};
  };
  auto Bf = [](double x, double y, double z) {
    // curl A for the field above
    return std::array<double, 3>{-std::cos(z), -std::cos(x), -std::cos(y)};
  };
  auto psif = [](double x, double y, double z) {
    const complexd up = std::exp(complexd(0.0, x + 0.5 * y)) * std::cos(z);
    const complexd dn = std::exp(complexd(0.0, -y)) * std::sin(x) * 0.5;
    return std::array<complexd, 2>{up, dn};
  };
  // analytic derivatives of psi
  auto dpsif = [&](double x, double y, double z, int axis) {
    const complexd up = std::exp(complexd(0.0, x + 0.5 * y)) * std::cos(z);
    const complexd dn = std::exp(complexd(0.0, -y)) * std::sin(x) * 0.5;
    switch (axis) {
      case 0:
        return std::array<complexd, 2>{complexd(0.0, 1.0) * up,
                                       std::exp(complexd(0.0, -y)) * std::cos(x) * 0.5};
      case 1:
        return std::array<complexd, 2>{complexd(0.0, 0.5) * up, complexd(0.0, -1.0) * dn};
      default:
        return std::array<complexd, 2>{-std::exp(complexd(0.0, x + 0.5 * y)) * std::sin(z),
                                       complexd(0.0, 0.0)};
    }
  };
  auto lap_psif = [&](double x, double y, double z) {
    const complexd up = std::exp(complexd(0.0, x + 0.5 * y)) * std::cos(z);
    const complexd dn = std::exp(complexd(0.0, -y)) * std::sin(x) * 0.5;
    // componentwise: up has wavevector (1, 1/2) and cos(z); dn has (0,-1) and sin(x)
    return std::array<complexd, 2>{up * (-1.0 - 0.25 - 1.0), dn * (-1.0 - 1.0)};
  };

  std::vector<double> errs;
  for (int n : {16, 32, 64}) {
    Grid3 g(n, 1.2);
    ScalarField V = ScalarField::sample(g, Vf);
    VectorField A = VectorField::sample(g, Af);
    HamiltonianSpec spec(OperatorKind::Pauli, h, V, A);
    SpinorField psi = SpinorField::sample(g, psif);
    SpinorField out = spec.apply(psi);

    double worst = 0.0;
    for (int k = 2; k < n - 2; ++k)
      for (int j = 2; j < n - 2; ++j)
        for (int i = 2; i < n - 2; ++i) {
          const double x = g.coord(i), y = g.coord(j), z = g.coord(k);
          auto p = psif(x, y, z);
          auto lp = lap_psif(x, y, z);
          auto a = Af(x, y, z);
          auto b = Bf(x, y, z);
          const double diva = 0.0; // divergence of this A vanishes
          std::array<complexd, 2> want{};
          for (int c = 0; c < 2; ++c) {
            complexd grad_dot(0.0);
            std::array<complexd, 2> d0 = dpsif(x, y, z, 0), d1 = dpsif(x, y, z, 1),
                                    d2 = dpsif(x, y, z, 2);
            grad_dot = a[0] * (c == 0 ? d0[0] : d0[1]) + a[1] * (c == 0 ? d1[0] : d1[1]) +
                       a[2] * (c == 0 ? d2[0] : d2[1]);
            const double a2 = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
            want[c] = -h * h * lp[c] + complexd(0.0, -h) * (diva * p[c] + 2.0 * grad_dot) +
                      a2 * p[c] - Vf(x, y, z) * p[c];
          }
          // Zeeman: h sigma.B psi
          want[0] += h * (b[2] * p[0] + complexd(b[0], -b[1]) * p[1]);
          want[1] += h * (complexd(b[0], b[1]) * p[0] - b[2] * p[1]);
          const std::size_t idx = g.index(i, j, k);
          worst = std::max(worst, std::abs(out.comp(idx, 0) - want[0]));
          worst = std::max(worst, std::abs(out.comp(idx, 1) - want[1]));
        }
    errs.push_back(worst);
  }
  // second-order consistency with a slowly fading cubic contaminant: the
  // pairwise order climbs toward 2
  const double order01 = std::log(errs[0] / errs[1]) / std::log(31.0 / 15.0);
  const double order12 = std::log(errs[1] / errs[2]) / std::log(63.0 / 31.0);
  CHECK(errs[1] < errs[0]);
  CHECK(errs[2] < errs[1]);
  CHECK(order01 >= 1.5);
  CHECK(order12 >= 1.8);
  CHECK(order12 >= order01 - 0.05);
}

TEST_CASE("kinetic part is positive semidefinite") {
  Grid3 g(10, 1.5);
  VectorField A = random_interior_vector(g, 44, 1.0);
  HamiltonianSpec spec(OperatorKind::Schrodinger, 0.8, ScalarField(g), A); // V = 0
  std::mt19937_64 rng(6);
  std::normal_distribution<double> gauss;
  std::vector<complexd> psi(g.node_count()), out(g.node_count());
  for (int trial = 0; trial < 4; ++trial) {
    for (auto& v : psi) v = complexd(gauss(rng), gauss(rng));
    spec.apply(psi.data(), out.data());
    double q = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) q += std::real(std::conj(psi[i]) * out[i]);
    CHECK(q >= -1e-10);
  }
}

TEST_CASE("Pauli operator approaches Schrodinger x identity as B -> 0") {
  Grid3 g(10, 1.5);
  ScalarField V = random_smooth_scalar(g, 3);
  const double h = 1.0, amp = 1e-3;
  VectorField A = VectorField::sample(g, [&](double x, double y, double) {
    return std::array<double, 3>{-0.5 * amp * y, 0.5 * amp * x, 0.0};
  });
  HamiltonianSpec pauli(OperatorKind::Pauli, h, V, A);
  HamiltonianSpec schro(OperatorKind::Schrodinger, h, V, A);

  std::mt19937_64 rng(8);
  std::normal_distribution<double> gauss;
  SpinorField psi(g);
  for (auto& v : psi.values()) v = complexd(gauss(rng), gauss(rng));
  double nrm = 0.0;
  for (auto& v : psi.values()) nrm += std::norm(v);
  nrm = std::sqrt(nrm);

  SpinorField pout = pauli.apply(psi);
  // apply the scalar operator per spin component
  std::vector<complexd> comp(g.node_count()), sout(g.node_count());
  double diff = 0.0;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < g.node_count(); ++i) comp[i] = psi.comp(i, c);
    schro.apply(comp.data(), sout.data());
    for (std::size_t i = 0; i < g.node_count(); ++i)
      diff += std::norm(pout.comp(i, c) - sout[i]);
  }
  const double bmax = pauli.magnetic_field().max_norm();
  CHECK(std::sqrt(diff) <= h * bmax * nrm * (1.0 + 1e-12));
  CHECK(bmax == doctest::Approx(amp).epsilon(1e-10));
}
