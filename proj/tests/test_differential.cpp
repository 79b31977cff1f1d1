#include <doctest.h>

#include <cmath>
#include <vector>

#include "mplab/differential.hpp"
#include "mplab/lab.hpp"

using namespace mplab;

namespace {

double interior_max_comp_error(const VectorField& got, const VectorField& want, int trim) {
  const Grid3& g = got.grid();
  const int n = g.n();
  double m = 0.0;
  for (int k = trim; k < n - trim; ++k)
    for (int j = trim; j < n - trim; ++j)
      for (int i = trim; i < n - trim; ++i)
        for (int c = 0; c < 3; ++c)
          m = std::max(m, std::abs(got.at(i, j, k, c) - want.at(i, j, k, c)));
  return m;
}

double interior_max_error(const ScalarField& got, const ScalarField& want, int trim) {
  const Grid3& g = got.grid();
  const int n = g.n();
  double m = 0.0;
  for (int k = trim; k < n - trim; ++k)
    for (int j = trim; j < n - trim; ++j)
      for (int i = trim; i < n - trim; ++i)
        m = std::max(m, std::abs(got.at(i, j, k) - want.at(i, j, k)));
  return m;
}

} // namespace

TEST_CASE("curl of a linear field is exact") {
  Grid3 g(16, 2.0);
  VectorField A = VectorField::sample(g, [](double x, double y, double) {
    return std::array<double, 3>{-0.5 * y, 0.5 * x, 0.0};
  });
  VectorField B = curl(A);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    worst = std::max(worst, std::abs(B.comp(i, 0)));
    worst = std::max(worst, std::abs(B.comp(i, 1)));
    worst = std::max(worst, std::abs(B.comp(i, 2) - 1.0));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("divergence of the identity field is exact") {
  Grid3 g(16, 2.0);
  VectorField A = VectorField::sample(g, [](double x, double y, double z) {
    return std::array<double, 3>{x, y, z};
  });
  ScalarField d = divergence(A);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) worst = std::max(worst, std::abs(d[i] - 3.0));
  CHECK(worst <= 1e-12);
}

TEST_CASE("curl(grad) and div(curl) vanish identically on the lattice") {
  Grid3 g(20, 2.0);
  ScalarField eta = random_smooth_scalar(g, 5);
  VectorField cg = curl(gradient(eta));
  CHECK(cg.max_norm() <= 1e-11);

  VectorField F = random_interior_vector(g, 9);
  ScalarField dc = divergence(curl(F));
  CHECK(dc.max_abs() <= 1e-11);
}

TEST_CASE("trigonometric fields converge at second order") {
  auto A_of = [](double x, double y, double z) {
    return std::array<double, 3>{std::sin(x) * std::cos(y), std::cos(y) * std::sin(z),
                                 std::sin(z) * std::cos(x)};
  };
  auto curl_of = [](double x, double y, double z) {
    return std::array<double, 3>{-std::cos(y) * std::cos(z), std::sin(x) * std::sin(z),
                                 std::sin(x) * std::sin(y)};
  };
  auto div_of = [](double x, double y, double z) {
    return std::cos(x) * std::cos(y) - std::sin(y) * std::sin(z) + std::cos(z) * std::cos(x);
  };

  std::vector<int> ns{16, 32};
  std::vector<double> errs_curl, errs_div;
  for (int n : ns) {
    Grid3 g(n, 1.5);
    VectorField A = VectorField::sample(g, A_of);
    VectorField cw = VectorField::sample(g, curl_of);
    ScalarField dw = ScalarField::sample(g, div_of);
    errs_curl.push_back(interior_max_comp_error(curl(A), cw, 1));
    errs_div.push_back(interior_max_error(divergence(A), dw, 1));
  }
  const double a_ratio = double(ns[1] - 1) / double(ns[0] - 1);
  CHECK(std::log(errs_curl[0] / errs_curl[1]) / std::log(a_ratio) >= 1.9);
  CHECK(std::log(errs_div[0] / errs_div[1]) / std::log(a_ratio) >= 1.9);
}

TEST_CASE("gauge gradient reproduces link differences exactly") {
  Grid3 g(14, 1.2);
  ScalarField eta = random_smooth_scalar(g, 21, 2.0);
  VectorField G = gauge_gradient(eta);
  const int n = g.n();
  const double a = g.spacing();
  const long step[3] = {1, n, long(n) * n};
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = g.index(i, j, k);
        const int ijk[3] = {i, j, k};
        for (int axis = 0; axis < 3; ++axis) {
          if (ijk[axis] == n - 1) continue;
          const double avg = 0.5 * (G.comp(idx, axis) + G.comp(idx + step[axis], axis));
          const double diff = (eta[idx + step[axis]] - eta[idx]) / a;
          worst = std::max(worst, std::abs(avg - diff));
        }
      }
  CHECK(worst <= 1e-12);
}

TEST_CASE("axis derivative transpose is the exact adjoint") {
  Grid3 g(10, 1.0);
  ScalarField u = random_smooth_scalar(g, 3), v = random_smooth_scalar(g, 4);
  for (int axis = 0; axis < 3; ++axis) {
    ScalarField Du = axis_derivative(u, axis);
    ScalarField Dtv = axis_derivative_transpose(v, axis);
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      a += Du[i] * v[i];
      b += u[i] * Dtv[i];
    }
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("curl transpose is the exact adjoint of curl") {
  Grid3 g(10, 1.0);
  VectorField u = random_interior_vector(g, 31), w = random_interior_vector(g, 32);
  VectorField Cu = curl(u);
  VectorField Ctw = curl_transpose(w);
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i)
    for (int c = 0; c < 3; ++c) {
      a += Cu.comp(i, c) * w.comp(i, c);
      b += u.comp(i, c) * Ctw.comp(i, c);
    }
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}
