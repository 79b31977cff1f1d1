#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>

#include "mplab/field_io.hpp"
#include "mplab/fields.hpp"

using namespace mplab;

TEST_CASE("grid invariants") {
  Grid3 g(16, 2.0);
  CHECK(g.spacing() == doctest::Approx(4.0 / 15.0).epsilon(1e-15));
  CHECK(g.coord(0) == -2.0);
  CHECK(g.coord(15) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g.node_count() == 16u * 16u * 16u);
  CHECK(g.index(1, 0, 0) == 1u);
  CHECK(g.index(0, 1, 0) == 16u);
  CHECK_THROWS(Grid3(7, 1.0));
  CHECK_THROWS(Grid3(16, -1.0));
}

TEST_CASE("field energy of a constant field fills the box volume") {
  Grid3 g(24, 1.7);
  VectorField B = VectorField::sample(g, [](double, double, double) {
    return std::array<double, 3>{0.0, 0.0, 1.0};
  });
  const double vol = std::pow(2.0 * 1.7, 3);
  CHECK(field_energy(B, 1.0) == doctest::Approx(vol).epsilon(1e-12));
  CHECK(field_energy(B, 3.5) == doctest::Approx(3.5 * vol).epsilon(1e-12));
  CHECK(field_energy(B, 2.0) == 2.0 * field_energy(B, 1.0)); // exact homogeneity
  CHECK(field_energy(VectorField(g), 1.0) == 0.0);
  CHECK_THROWS(field_energy(B, -1.0));
}

TEST_CASE("lp norm powers") {
  Grid3 g(64, 1.5);
  ScalarField neg = ScalarField::sample(g, [](double, double, double) { return -2.0; });
  CHECK(lp_norm_power(neg, 2.5) == 0.0);
  CHECK(lp_norm_power(neg, 1.0) == 0.0);

  ScalarField one = ScalarField::sample(g, [](double, double, double) { return 1.0; });
  CHECK(lp_norm_power(one, 2.5) == doctest::Approx(std::pow(3.0, 3)).epsilon(1e-12));

  // f = [1-|x|^2]_+ at p = 5/2 against a radial quadrature oracle
  ScalarField f = ScalarField::sample(g, [](double x, double y, double z) {
    return 1.0 - (x * x + y * y + z * z);
  });
  double oracle = 0.0;
  {
    const int N = 20000;
    const double dr = 1.0 / N;
    auto ig = [](double r) { return std::pow(1.0 - r * r, 2.5) * r * r; };
    for (int i = 0; i < N; ++i)
      oracle += dr / 6.0 * (ig(i * dr) + 4.0 * ig((i + 0.5) * dr) + ig((i + 1) * dr));
    oracle *= 4.0 * M_PI;
    CHECK(oracle == doctest::Approx(5.0 * M_PI * M_PI / 64.0).epsilon(1e-10));
  }
  CHECK(lp_norm_power(f, 2.5) == doctest::Approx(oracle).epsilon(1e-3));
  CHECK_THROWS(lp_norm_power(f, 0.0));
}

TEST_CASE("checkpoints round trip bit exactly") {
  Grid3 g(12, 0.83);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> gauss;
  const auto dir = std::filesystem::temp_directory_path() / "mplab_io_test";
  std::filesystem::create_directories(dir);

  ScalarField f(g);
  for (auto& v : f.values()) v = gauss(rng);
  save_field(f, (dir / "s.mplab").string());
  ScalarField f2 = load_scalar_field((dir / "s.mplab").string());
  REQUIRE(f2.grid() == g);
  CHECK(std::memcmp(f.values().data(), f2.values().data(),
                    f.values().size() * sizeof(double)) == 0);

  VectorField a(g);
  for (auto& v : a.values()) v = gauss(rng);
  save_field(a, (dir / "v.mplab").string());
  VectorField a2 = load_vector_field((dir / "v.mplab").string());
  CHECK(std::memcmp(a.values().data(), a2.values().data(),
                    a.values().size() * sizeof(double)) == 0);

  SpinorField p(g);
  for (auto& v : p.values()) v = complexd(gauss(rng), gauss(rng));
  save_field(p, (dir / "p.mplab").string());
  SpinorField p2 = load_spinor_field((dir / "p.mplab").string());
  CHECK(std::memcmp(p.values().data(), p2.values().data(),
                    p.values().size() * sizeof(complexd)) == 0);

  CHECK_THROWS(load_vector_field((dir / "s.mplab").string())); // kind mismatch
}

TEST_CASE("reductions are reproducible") {
  Grid3 g(16, 1.0);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  VectorField B(g);
  for (auto& v : B.values()) v = gauss(rng);
  CHECK(field_energy(B, 1.3) == field_energy(B, 1.3));
}
