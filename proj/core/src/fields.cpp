#include "mplab/fields.hpp"

#include <cmath>
#include <stdexcept>

#include "mplab/differential.hpp"

namespace mplab {

ScalarField ScalarField::sample(const Grid3& g,
                                const std::function<double(double, double, double)>& f) {
  ScalarField out(g);
  const int n = g.n();
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        out.at(i, j, k) = f(g.coord(i), g.coord(j), g.coord(k));
  return out;
}

bool ScalarField::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

VectorField VectorField::sample(
    const Grid3& g,
    const std::function<std::array<double, 3>(double, double, double)>& f) {
  VectorField out(g);
  const int n = g.n();
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        auto v = f(g.coord(i), g.coord(j), g.coord(k));
        for (int c = 0; c < 3; ++c) out.at(i, j, k, c) = v[c];
      }
  return out;
}

bool VectorField::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

double VectorField::max_norm() const {
  double m = 0.0;
  const std::size_t nn = grid_.node_count();
  for (std::size_t idx = 0; idx < nn; ++idx) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) s += comp(idx, c) * comp(idx, c);
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

VectorField& VectorField::operator+=(const VectorField& o) {
  require_same_grid(grid_, o.grid_, "VectorField::operator+=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  require_same_grid(grid_, o.grid_, "VectorField::operator-=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

SpinorField SpinorField::sample(
    const Grid3& g,
    const std::function<std::array<complexd, 2>(double, double, double)>& f) {
  SpinorField out(g);
  const int n = g.n();
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        auto v = f(g.coord(i), g.coord(j), g.coord(k));
        std::size_t idx = g.index(i, j, k);
        out.comp(idx, 0) = v[0];
        out.comp(idx, 1) = v[1];
      }
  return out;
}

bool SpinorField::all_finite() const {
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

double SpinorField::norm() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return std::sqrt(s * grid_.cell_volume());
}

double field_energy(const VectorField& B, double beta) {
  if (beta < 0.0) throw std::invalid_argument("field_energy: beta must be >= 0");
  const Grid3& g = B.grid();
  const int n = g.n();
  double s = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        std::size_t idx = g.index(i, j, k);
        double b2 = 0.0;
        for (int c = 0; c < 3; ++c) b2 += B.comp(idx, c) * B.comp(idx, c);
        s += g.weight(i, j, k) * b2;
      }
  return beta * s;
}

double lp_norm_power(const ScalarField& f, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm_power: p must be > 0");
  const Grid3& g = f.grid();
  const int n = g.n();
  double s = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        double v = f.at(i, j, k);
        if (v > 0.0) s += g.weight(i, j, k) * std::pow(v, p);
      }
  return s;
}

double integral(const ScalarField& f) {
  const Grid3& g = f.grid();
  const int n = g.n();
  double s = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) s += g.weight(i, j, k) * f.at(i, j, k);
  return s;
}

double l2_norm_sq(const VectorField& A) {
  const Grid3& g = A.grid();
  const int n = g.n();
  double s = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        std::size_t idx = g.index(i, j, k);
        double v2 = 0.0;
        for (int c = 0; c < 3; ++c) v2 += A.comp(idx, c) * A.comp(idx, c);
        s += g.weight(i, j, k) * v2;
      }
  return s;
}

double grad_tensor_norm_sq(const VectorField& A) {
  const Grid3& g = A.grid();
  const int n = g.n();
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    ScalarField comp(g);
    for (std::size_t idx = 0; idx < g.node_count(); ++idx) comp[idx] = A.comp(idx, c);
    for (int axis = 0; axis < 3; ++axis) {
      ScalarField d = axis_derivative(comp, axis);
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i)
            s += g.weight(i, j, k) * d.at(i, j, k) * d.at(i, j, k);
    }
  }
  return s;
}

} // namespace mplab
