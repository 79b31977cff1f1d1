#include <cmath>
#include <stdexcept>

#include "mplab/lab.hpp"
#include "mplab/hamiltonian.hpp"

namespace mplab::lab {

Grid3 make_grid(const Scenario& s) {
  return Grid3(s.integer("grid.n", 32), s.number("grid.L", 6.0));
}

ScalarField make_potential(const Scenario& s, const Grid3& grid) {
  const std::string kind = s.get("potential.kind", "harmonic");
  if (kind == "harmonic") {
    const double shift = s.number("potential.shift", 2.5);
    return ScalarField::sample(grid, [shift](double x, double y, double z) {
      return shift - (x * x + y * y + z * z);
    });
  }
  if (kind == "bump") {
    const double amp = s.number("potential.amplitude", 1.0);
    const double radius = s.number("potential.radius", 1.2);
    const double cx = s.number("potential.center_x", 0.0);
    const double cy = s.number("potential.center_y", 0.0);
    const double cz = s.number("potential.center_z", 0.0);
    return ScalarField::sample(grid, [=](double x, double y, double z) {
      const double dx = x - cx, dy = y - cy, dz = z - cz;
      const double t2 = (dx * dx + dy * dy + dz * dz) / (radius * radius);
      if (t2 >= 1.0) return 0.0;
      return amp * std::exp(1.0 - 1.0 / (1.0 - t2));
    });
  }
  if (kind == "coulomb_cutoff") {
    const double c = s.number("potential.c", 1.0);
    const double cap = c / grid.spacing();
    return ScalarField::sample(grid, [=](double x, double y, double z) {
      const double r = std::sqrt(x * x + y * y + z * z);
      const double coul = std::min(r > 0.0 ? c / r : cap, cap);
      return std::max(coul - 1.0, 0.0);
    });
  }
  throw std::runtime_error("unknown potential.kind: " + kind);
}

} // namespace mplab::lab

namespace mplab::lab {

VectorField oscillator_bench_potential(const Grid3& grid, double B) {
  const double s = B / std::sqrt(2.0);
  return VectorField::sample(grid, [s](double x, double y, double) {
    return std::array<double, 3>{-s * y, s * x, 0.0};
  });
}

HamiltonianSpec oscillator_bench_spec(const Grid3& grid, double level_shift, double B) {
  ScalarField V = ScalarField::sample(grid, [level_shift](double x, double y, double z) {
    return level_shift - 0.5 * (x * x + y * y + z * z);
  });
  std::optional<VectorField> A;
  if (B != 0.0) A = oscillator_bench_potential(grid, B);
  return HamiltonianSpec(OperatorKind::Schrodinger, 1.0 / std::sqrt(2.0), std::move(V),
                         std::move(A));
}

} // namespace mplab::lab
