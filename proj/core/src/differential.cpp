#include "mplab/differential.hpp"

#include <cmath>

namespace mplab {

namespace {

// stride-aware 1-D derivative along one line
inline void dline(const double* u, double* out, int n, long stride, double inv2a) {
  out[0] = (-3.0 * u[0] + 4.0 * u[stride] - u[2 * stride]) * inv2a;
  for (int i = 1; i < n - 1; ++i)
    out[i] = (u[(static_cast<long>(i) + 1) * stride] - u[(static_cast<long>(i) - 1) * stride]) * inv2a;
  out[n - 1] = (3.0 * u[static_cast<long>(n - 1) * stride] - 4.0 * u[static_cast<long>(n - 2) * stride] +
                u[static_cast<long>(n - 3) * stride]) * inv2a;
}

inline void dline_transpose(const double* v, double* out, int n, long stride, double inv2a) {
  out[0] = (-3.0 * v[0] - v[stride]) * inv2a;
  out[1] = (4.0 * v[0] - v[2 * stride]) * inv2a;
  out[2] = (-v[0] + v[stride] - v[3 * stride]) * inv2a;
  for (int i = 3; i <= n - 4; ++i)
    out[i] = (v[(static_cast<long>(i) - 1) * stride] - v[(static_cast<long>(i) + 1) * stride]) * inv2a;
  out[n - 3] = (v[static_cast<long>(n - 4) * stride] - v[static_cast<long>(n - 2) * stride] +
                v[static_cast<long>(n - 1) * stride]) * inv2a;
  out[n - 2] = (v[static_cast<long>(n - 3) * stride] - 4.0 * v[static_cast<long>(n - 1) * stride]) * inv2a;
  out[n - 1] = (v[static_cast<long>(n - 2) * stride] + 3.0 * v[static_cast<long>(n - 1) * stride]) * inv2a;
}

template <typename LineOp>
ScalarField apply_axis(const ScalarField& f, int axis, LineOp op) {
  const Grid3& g = f.grid();
  const int n = g.n();
  ScalarField out(g);
  std::vector<double> line(n);
  const long strides[3] = {1, n, static_cast<long>(n) * n};
  const long s = strides[axis];
  const double inv2a = 1.0 / (2.0 * g.spacing());
  // iterate over all lines perpendicular to `axis`
  const int a1 = (axis == 0) ? 1 : 0;
  const int a2 = (axis == 2) ? 1 : 2;
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) {
      int ijk[3] = {0, 0, 0};
      ijk[a1] = p;
      ijk[a2] = q;
      const std::size_t base = g.index(ijk[0], ijk[1], ijk[2]);
      op(f.values().data() + base, line.data(), n, s, inv2a);
      for (int i = 0; i < n; ++i) out.values()[base + static_cast<std::size_t>(i) * s] = line[i];
    }
  return out;
}

} // namespace

ScalarField axis_derivative(const ScalarField& f, int axis) {
  return apply_axis(f, axis, [](const double* u, double* o, int n, long s, double c) {
    dline(u, o, n, s, c);
  });
}

ScalarField axis_derivative_transpose(const ScalarField& f, int axis) {
  return apply_axis(f, axis, [](const double* u, double* o, int n, long s, double c) {
    dline_transpose(u, o, n, s, c);
  });
}

VectorField gradient(const ScalarField& f) {
  VectorField out(f.grid());
  for (int axis = 0; axis < 3; ++axis) {
    ScalarField d = axis_derivative(f, axis);
    for (std::size_t idx = 0; idx < f.grid().node_count(); ++idx) out.comp(idx, axis) = d[idx];
  }
  return out;
}

namespace {
ScalarField component(const VectorField& A, int c) {
  ScalarField out(A.grid());
  for (std::size_t idx = 0; idx < A.grid().node_count(); ++idx) out[idx] = A.comp(idx, c);
  return out;
}
} // namespace

VectorField curl(const VectorField& A) {
  const Grid3& g = A.grid();
  VectorField out(g);
  ScalarField ax = component(A, 0), ay = component(A, 1), az = component(A, 2);
  ScalarField d2az = axis_derivative(az, 1), d3ay = axis_derivative(ay, 2);
  ScalarField d3ax = axis_derivative(ax, 2), d1az = axis_derivative(az, 0);
  ScalarField d1ay = axis_derivative(ay, 0), d2ax = axis_derivative(ax, 1);
  for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
    out.comp(idx, 0) = d2az[idx] - d3ay[idx];
    out.comp(idx, 1) = d3ax[idx] - d1az[idx];
    out.comp(idx, 2) = d1ay[idx] - d2ax[idx];
  }
  return out;
}

ScalarField divergence(const VectorField& A) {
  const Grid3& g = A.grid();
  ScalarField out(g);
  for (int axis = 0; axis < 3; ++axis) {
    ScalarField d = axis_derivative(component(A, axis), axis);
    for (std::size_t idx = 0; idx < g.node_count(); ++idx) out[idx] += d[idx];
  }
  return out;
}

ScalarField gradient_transpose(const VectorField& A) {
  const Grid3& g = A.grid();
  ScalarField out(g);
  for (int axis = 0; axis < 3; ++axis) {
    ScalarField d = axis_derivative_transpose(component(A, axis), axis);
    for (std::size_t idx = 0; idx < g.node_count(); ++idx) out[idx] += d[idx];
  }
  return out;
}

VectorField curl_transpose(const VectorField& u) {
  const Grid3& g = u.grid();
  VectorField out(g);
  ScalarField u1 = component(u, 0), u2 = component(u, 1), u3 = component(u, 2);
  // <u, C A> = <C^T u, A> with (C^T u)_1 = D3^T u2 - D2^T u3, cyclic.
  ScalarField d3tu2 = axis_derivative_transpose(u2, 2), d2tu3 = axis_derivative_transpose(u3, 1);
  ScalarField d1tu3 = axis_derivative_transpose(u3, 0), d3tu1 = axis_derivative_transpose(u1, 2);
  ScalarField d2tu1 = axis_derivative_transpose(u1, 1), d1tu2 = axis_derivative_transpose(u2, 0);
  for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
    out.comp(idx, 0) = d3tu2[idx] - d2tu3[idx];
    out.comp(idx, 1) = d1tu3[idx] - d3tu1[idx];
    out.comp(idx, 2) = d2tu1[idx] - d1tu2[idx];
  }
  return out;
}

VectorField gauge_gradient(const ScalarField& eta) {
  const Grid3& g = eta.grid();
  const int n = g.n();
  const double a = g.spacing();
  VectorField out(g);
  std::vector<double> p(n);
  for (int axis = 0; axis < 3; ++axis) {
    const long strides[3] = {1, n, static_cast<long>(n) * n};
    const long s = strides[axis];
    const int a1 = (axis == 0) ? 1 : 0;
    const int a2 = (axis == 2) ? 1 : 2;
    for (int q = 0; q < n; ++q)
      for (int pp = 0; pp < n; ++pp) {
        int ijk[3] = {0, 0, 0};
        ijk[a1] = pp;
        ijk[a2] = q;
        const std::size_t base = g.index(ijk[0], ijk[1], ijk[2]);
        const double* e = eta.values().data() + base;
        // particular solution of G(i) + G(i+1) = 2 (eta(i+1)-eta(i))/a,
        // then the least-norm member of the one-parameter solution family
        p[0] = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
          double d = 2.0 * (e[(static_cast<long>(i) + 1) * s] - e[static_cast<long>(i) * s]) / a;
          p[i + 1] = d - p[i];
        }
        double alt = 0.0;
        for (int i = 0; i < n; ++i) alt += (i % 2 == 0 ? p[i] : -p[i]);
        const double t = -alt / n;
        for (int i = 0; i < n; ++i)
          out.values()[3 * (base + static_cast<std::size_t>(i) * s) + axis] =
              p[i] + (i % 2 == 0 ? t : -t);
      }
  }
  return out;
}

} // namespace mplab
