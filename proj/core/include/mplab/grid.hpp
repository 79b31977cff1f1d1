#pragma once

#include <cstddef>
#include <stdexcept>

namespace mplab {

/// Uniform collocated grid on the cube [-L, L]^3 with n nodes per axis and
/// Dirichlet values implied at the ghost layer outside the box.
///
/// Node (i,j,k) sits at (-L + i*a, -L + j*a, -L + k*a) with a = 2L/(n-1).
/// The linear index is i + n*(j + n*k); all reductions in this library run
/// in ascending linear index order so results are reproducible bit for bit.
class Grid3 {
public:
  Grid3(int n, double box_half_width)
      : n_(n), half_width_(box_half_width),
        spacing_(2.0 * box_half_width / (n - 1)) {
    if (n < 8) throw std::invalid_argument("Grid3: need at least 8 nodes per axis");
    if (box_half_width <= 0.0) throw std::invalid_argument("Grid3: box half width must be positive");
  }

  int n() const { return n_; }
  double half_width() const { return half_width_; }
  double spacing() const { return spacing_; }
  std::size_t node_count() const {
    return static_cast<std::size_t>(n_) * n_ * n_;
  }

  double coord(int i) const { return -half_width_ + spacing_ * i; }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(n_) * (static_cast<std::size_t>(j) +
                                           static_cast<std::size_t>(n_) * k);
  }

  bool on_boundary(int i, int j, int k) const {
    return i == 0 || j == 0 || k == 0 || i == n_ - 1 || j == n_ - 1 || k == n_ - 1;
  }

  /// Trapezoid quadrature weight along one axis (a/2 at the end nodes).
  double axis_weight(int i) const {
    return (i == 0 || i == n_ - 1) ? 0.5 * spacing_ : spacing_;
  }
  /// Product quadrature weight of node (i,j,k); integrates constants over
  /// the box exactly.
  double weight(int i, int j, int k) const {
    return axis_weight(i) * axis_weight(j) * axis_weight(k);
  }
  /// Plain cell volume a^3 used by the spectral l2 calculus.
  double cell_volume() const { return spacing_ * spacing_ * spacing_; }

  bool operator==(const Grid3& o) const {
    return n_ == o.n_ && half_width_ == o.half_width_;
  }
  bool operator!=(const Grid3& o) const { return !(*this == o); }

private:
  int n_;
  double half_width_;
  double spacing_;
};

inline void require_same_grid(const Grid3& a, const Grid3& b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

} // namespace mplab
