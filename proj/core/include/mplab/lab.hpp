#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mplab/fields.hpp"
#include "mplab/hamiltonian.hpp"

namespace mplab::lab {

/// Flat key-value scenario file with dotted section names:
///   experiment = paramagnetism
///   grid.n = 32
///   sweep.beta = 3e-4, 1e-3, 3e-3
/// '#' starts a comment; keys are unique; values are trimmed verbatim.
class Scenario {
public:
  static Scenario from_file(const std::string& path);
  static Scenario from_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback = "") const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::vector<double> list(const std::string& key, std::vector<double> fallback = {}) const;
  void set(const std::string& key, const std::string& value);

  std::string experiment() const { return get("experiment"); }
  std::uint64_t seed() const;
  const std::map<std::string, std::string>& entries() const { return entries_; }

private:
  std::map<std::string, std::string> entries_;
};

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<Table> tables;
  std::vector<Assertion> assertions;
  bool all_pass() const;
};

Grid3 make_grid(const Scenario& s);
/// Analytic potential families: harmonic (shift - |x|^2), bump
/// (amplitude, radius, center), coulomb_cutoff ([c/|x| - 1]_+, capped at c/a).
ScalarField make_potential(const Scenario& s, const Grid3& grid);

/// Harmonic benchmark operator whose exact levels are
///   e(n1,n2,n3) = (n1+n2+1) sqrt(1+B^2) + n3 + 1/2 + (n1-n2) B - level_shift.
/// Realized as h = 1/sqrt(2), V = (2*level_shift - |x|^2)/2 and the constant
/// field potential A = (B/sqrt(2)) (-y, x, 0); the published closed form is
/// stated in this half convention, not for (-i grad + A)^2 + |x|^2 itself.
HamiltonianSpec oscillator_bench_spec(const Grid3& grid, double level_shift, double B);
/// The A of the benchmark spec above (useful for its own field energy:
/// integral |curl A|^2 = 2 B^2 (2L)^3).
VectorField oscillator_bench_potential(const Grid3& grid, double B);

ExperimentResult run_weyl_convergence(const Scenario& s);
ExperimentResult run_kappa_scaling(const Scenario& s);
ExperimentResult run_paramagnetism(const Scenario& s);
ExperimentResult run_gauge_suite(const Scenario& s);
ExperimentResult run_instability_probe(const Scenario& s);
ExperimentResult run_scenario(const Scenario& s);

/// Writes one CSV per table (scenario echoed in '#' header lines) plus
/// report.txt with one PASS/FAIL line per assertion.
void write_results(const ExperimentResult& r, const Scenario& s, const std::string& out_dir);

} // namespace mplab::lab

namespace mplab {

/// Seeded smooth test fields: low-order trigonometric series windowed to
/// vanish on a few boundary layers.
ScalarField random_smooth_scalar(const Grid3& grid, std::uint64_t seed, double amplitude = 1.0);
VectorField random_interior_vector(const Grid3& grid, std::uint64_t seed, double amplitude = 1.0);

} // namespace mplab
