#include <doctest.h>

#include <cmath>
#include <random>

#include "mplab/differential.hpp"
#include "mplab/lab.hpp"
#include "mplab/spectrum.hpp"

using namespace mplab;

namespace {

ScalarField oscillator_V(const Grid3& g, double shift) {
  return ScalarField::sample(g, [shift](double x, double y, double z) {
    return shift - (x * x + y * y + z * z);
  });
}

VectorField constant_A(const Grid3& g, double B) {
  return VectorField::sample(g, [B](double x, double y, double) {
    return std::array<double, 3>{-0.5 * B * y, 0.5 * B * x, 0.0};
  });
}

} // namespace

TEST_CASE("positive operator has no negative spectrum") {
  Grid3 g(10, 3.0);
  ScalarField V = ScalarField::sample(g, [](double, double, double) { return -1.0; });
  HamiltonianSpec spec(OperatorKind::Schrodinger, 1.0, V, std::nullopt);
  NegativeSpectrum ns = negative_spectrum(spec, 1e-9);
  CHECK(ns.count == 0);
  CHECK(ns.sum_negative == 0.0);
  CHECK(ns.converged);
}

TEST_CASE("iterative solver matches the dense oracle") {
  Grid3 g(14, 5.0); // dim 2744: dense is the exact reference
  HamiltonianSpec spec = lab::oscillator_bench_spec(g, 3.0, 0.6);

  EigenSolveOptions dense;
  dense.tol = 1e-10;
  auto [nsd, prd] = negative_spectrum_full(spec, dense);
  (void)prd;

  EigenSolveOptions iter = dense;
  iter.dense_threshold = 0; // force the Krylov path
  auto [nsi, pri] = negative_spectrum_full(spec, iter);

  REQUIRE(nsd.count >= 2);
  REQUIRE(nsi.count == nsd.count);
  for (int i = 0; i < nsd.count; ++i)
    CHECK(nsi.eigenvalues[i] == doctest::Approx(nsd.eigenvalues[i]).epsilon(1e-8));
  CHECK(nsi.converged);
  CHECK(std::abs(nsi.sum_negative - nsd.sum_negative) <= 1e-7);

  Eigen::MatrixXcd gram = pri.vectors.adjoint() * pri.vectors;
  for (int i = 0; i < gram.rows(); ++i)
    for (int j = 0; j < gram.cols(); ++j)
      CHECK(std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-10);
}

TEST_CASE("oscillator trace approaches the closed form") {
  // B = 0 at modest resolution; the 3% version runs at n = 48 in acceptance
  Grid3 g(20, 5.0);
  HamiltonianSpec spec = lab::oscillator_bench_spec(g, 2.5, 0.0);
  EigenSolveOptions eo;
  eo.tol = 1e-9;
  auto [ns, pr] = negative_spectrum_full(spec, eo);
  (void)pr;
  CHECK(ns.count == 1);
  CHECK(ns.sum_negative == doctest::Approx(-1.0).epsilon(0.08));
}

TEST_CASE("density integrates to the occupation count") {
  Grid3 g(14, 5.0);
  HamiltonianSpec spec = lab::oscillator_bench_spec(g, 3.0, 0.0); // 3/2 and 5/2 (x3) bound
  EigenSolveOptions eo;
  eo.tol = 1e-10;
  auto [ns, pr] = negative_spectrum_full(spec, eo);
  REQUIRE(ns.count == 4);
  ScalarField rho = density(pr);
  CHECK(integral(rho) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("ground state density matches the analytic Gaussian") {
  Grid3 g(32, 5.0);
  HamiltonianSpec spec = lab::oscillator_bench_spec(g, 2.0, 0.0); // one bound state
  EigenSolveOptions eo;
  eo.tol = 1e-9;
  auto [ns, pr] = negative_spectrum_full(spec, eo);
  REQUIRE(ns.count == 1);
  ScalarField rho = density(pr);
  double num = 0.0, den = 0.0;
  for (int k = 0; k < g.n(); ++k)
    for (int j = 0; j < g.n(); ++j)
      for (int i = 0; i < g.n(); ++i) {
        const double x = g.coord(i), y = g.coord(j), z = g.coord(k);
        const double want = std::pow(M_PI, -1.5) * std::exp(-(x * x + y * y + z * z));
        const double w = g.weight(i, j, k);
        num += w * (rho.at(i, j, k) - want) * (rho.at(i, j, k) - want);
        den += w * want * want;
      }
  CHECK(std::sqrt(num / den) <= 0.02);
}

TEST_CASE("real bound states carry no current") {
  Grid3 g(12, 5.0);
  HamiltonianSpec spec = lab::oscillator_bench_spec(g, 2.0, 0.0);
  EigenSolveOptions eo;
  eo.tol = 1e-11;
  auto [ns, pr] = negative_spectrum_full(spec, eo);
  REQUIRE(ns.count == 1);
  VectorField J = current(pr, spec);
  CHECK(J.max_norm() <= 1e-10);
}

TEST_CASE("boosted envelope carries current -k density") {
  const double h = 1.0, kx = 0.4;
  std::vector<double> errs;
  for (int n : {16, 32}) {
    Grid3 g(n, 5.0);
    ScalarField V = oscillator_V(g, 2.0);
    HamiltonianSpec spec(OperatorKind::Schrodinger, h, V, std::nullopt);

    SpectralProjector pr;
    pr.grid = g;
    pr.components = 1;
    pr.converged = true;
    Eigen::VectorXcd v(g.node_count());
    for (int k = 0; k < g.n(); ++k)
      for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) {
          const double x = g.coord(i), y = g.coord(j), z = g.coord(k);
          v[g.index(i, j, k)] =
              std::polar(1.0, kx * x / h) * std::exp(-0.5 * (x * x + y * y + z * z));
        }
    v.normalize();
    pr.vectors = v;
    pr.eigenvalues = {-1.0};
    pr.residuals = {0.0};

    VectorField J = current(pr, spec);
    ScalarField rho = density(pr);
    double worst = 0.0, scale = 0.0;
    for (int k = 2; k < g.n() - 2; ++k)
      for (int j = 2; j < g.n() - 2; ++j)
        for (int i = 2; i < g.n() - 2; ++i) {
          const std::size_t idx = g.index(i, j, k);
          worst = std::max(worst, std::abs(J.comp(idx, 0) + kx * rho[idx]));
          worst = std::max(worst, std::abs(J.comp(idx, 1)));
          worst = std::max(worst, std::abs(J.comp(idx, 2)));
          scale = std::max(scale, std::abs(kx) * rho[idx]);
        }
    errs.push_back(worst / scale);
  }
  CHECK(errs[1] <= 0.05);
  CHECK(errs[0] / errs[1] >= 3.0); // second-order interior error
}

TEST_CASE("stationary currents are divergence free") {
  Grid3 g(28, 5.0);
  HamiltonianSpec spec = lab::oscillator_bench_spec(g, 2.5, 1.0);
  EigenSolveOptions eo;
  eo.tol = 1e-10;
  auto [ns, pr] = negative_spectrum_full(spec, eo);
  REQUIRE(ns.count >= 1);
  VectorField J = current(pr, spec);
  ScalarField divJ = divergence(J);
  double worst = 0.0;
  for (int k = 2; k < g.n() - 2; ++k)
    for (int j = 2; j < g.n() - 2; ++j)
      for (int i = 2; i < g.n() - 2; ++i) worst = std::max(worst, std::abs(divJ.at(i, j, k)));
  CHECK(worst <= 1e-3);
}

TEST_CASE("Dirichlet box enlargement never raises eigenvalues") {
  const double a = 10.0 / 13.0;
  Grid3 small(14, 6.5 * a);
  Grid3 big(28, 13.5 * a); // same spacing, twice the box
  HamiltonianSpec s1 = lab::oscillator_bench_spec(small, 2.5, 0.0);
  HamiltonianSpec s2 = lab::oscillator_bench_spec(big, 2.5, 0.0);
  EigenSolveOptions eo;
  eo.tol = 1e-9;
  auto [n1, p1] = negative_spectrum_full(s1, eo);
  auto [n2, p2] = negative_spectrum_full(s2, eo);
  (void)p1;
  (void)p2;
  REQUIRE(n1.count >= 1);
  REQUIRE(n2.count >= n1.count);
  for (int i = 0; i < n1.count; ++i) CHECK(n2.eigenvalues[i] <= n1.eigenvalues[i] + 1e-7);
}

TEST_CASE("gauge shifts leave the negative sum invariant") {
  Grid3 g(12, 5.0);
  HamiltonianSpec spec = lab::oscillator_bench_spec(g, 2.5, 0.8);
  ScalarField eta = random_smooth_scalar(g, 77, 1.1);
  HamiltonianSpec shifted = spec.gauge_shifted(eta);
  EigenSolveOptions eo;
  eo.tol = 1e-11;
  auto [n1, p1] = negative_spectrum_full(spec, eo);
  auto [n2, p2] = negative_spectrum_full(shifted, eo);
  (void)p1;
  (void)p2;
  REQUIRE(n1.count == n2.count);
  CHECK(std::abs(n1.sum_negative - n2.sum_negative) <= 1e-10);
}
