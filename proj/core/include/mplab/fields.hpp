#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "mplab/grid.hpp"

namespace mplab {

using complexd = std::complex<double>;

/// Real scalar sample per node.
class ScalarField {
public:
  explicit ScalarField(const Grid3& grid, double fill = 0.0)
      : grid_(grid), values_(grid.node_count(), fill) {}

  static ScalarField sample(const Grid3& grid,
                            const std::function<double(double, double, double)>& f);

  const Grid3& grid() const { return grid_; }
  double& operator[](std::size_t idx) { return values_[idx]; }
  double operator[](std::size_t idx) const { return values_[idx]; }
  double& at(int i, int j, int k) { return values_[grid_.index(i, j, k)]; }
  double at(int i, int j, int k) const { return values_[grid_.index(i, j, k)]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool all_finite() const;
  double max_abs() const;

private:
  Grid3 grid_;
  std::vector<double> values_;
};

/// Three real components per node, stored component-major per node
/// (x,y,z adjacent).
class VectorField {
public:
  explicit VectorField(const Grid3& grid)
      : grid_(grid), values_(3 * grid.node_count(), 0.0) {}

  static VectorField sample(
      const Grid3& grid,
      const std::function<std::array<double, 3>(double, double, double)>& f);

  const Grid3& grid() const { return grid_; }
  double& comp(std::size_t idx, int c) { return values_[3 * idx + c]; }
  double comp(std::size_t idx, int c) const { return values_[3 * idx + c]; }
  double& at(int i, int j, int k, int c) { return values_[3 * grid_.index(i, j, k) + c]; }
  double at(int i, int j, int k, int c) const { return values_[3 * grid_.index(i, j, k) + c]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool all_finite() const;
  double max_norm() const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);

private:
  Grid3 grid_;
  std::vector<double> values_;
};

/// Two complex components per node (node-major, components adjacent).
class SpinorField {
public:
  explicit SpinorField(const Grid3& grid)
      : grid_(grid), values_(2 * grid.node_count(), complexd(0.0, 0.0)) {}

  static SpinorField sample(
      const Grid3& grid,
      const std::function<std::array<complexd, 2>(double, double, double)>& f);

  const Grid3& grid() const { return grid_; }
  complexd& comp(std::size_t idx, int c) { return values_[2 * idx + c]; }
  complexd comp(std::size_t idx, int c) const { return values_[2 * idx + c]; }
  std::vector<complexd>& values() { return values_; }
  const std::vector<complexd>& values() const { return values_; }

  bool all_finite() const;
  /// l2 norm weighted by a^3 (the spectral calculus norm).
  double norm() const;

private:
  Grid3 grid_;
  std::vector<complexd> values_;
};

/// beta * integral |B|^2, trapezoid product rule. beta must be >= 0.
double field_energy(const VectorField& B, double beta);

/// integral of the positive part [f]_+^p, trapezoid product rule. p must be > 0.
double lp_norm_power(const ScalarField& f, double p);

/// integral of f (signed), trapezoid product rule.
double integral(const ScalarField& f);

/// integral |A|^2 of a vector field, trapezoid product rule.
double l2_norm_sq(const VectorField& A);

/// Sum of |grad (x) A|^2 = sum_{ij} (D_i A_j)^2 integrated with the trapezoid
/// rule; companion of the curl/divergence split identity.
double grad_tensor_norm_sq(const VectorField& A);

} // namespace mplab
