#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>

#include "mplab/spectrum.hpp"

#include <fftw3.h>
#include <lapacke.h>

#include <cmath>
#include <cstdlib>
#include <ostream>

#include "mplab/differential.hpp"
#include "mplab/lobpcg.hpp"

namespace mplab {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXd;

/// (T0 + s)^{-1} through the 3-D sine transform, T0 the field-free Dirichlet
/// kinetic operator h^2 (2 - 2cos(pi k/(n+1)))/a^2 per axis. Positive
/// definite, so it is an admissible LOBPCG preconditioner whatever the link
/// phases look like.
class DstPreconditioner {
public:
  DstPreconditioner(const Grid3& grid, int components, double h, double shift)
      : n_(grid.n()), nc_(components), shift_(shift), buf_(grid.node_count()),
        inv_eig_(grid.node_count()) {
    const double a = grid.spacing();
    std::vector<double> eig1(n_);
    for (int k = 0; k < n_; ++k)
      eig1[k] = h * h * (2.0 - 2.0 * std::cos(M_PI * (k + 1) / (n_ + 1))) / (a * a);
    const double norm = 1.0 / std::pow(2.0 * (n_ + 1), 3);
    for (int k3 = 0; k3 < n_; ++k3)
      for (int k2 = 0; k2 < n_; ++k2)
        for (int k1 = 0; k1 < n_; ++k1)
          inv_eig_[grid.index(k1, k2, k3)] =
              norm / (eig1[k1] + eig1[k2] + eig1[k3] + shift_);
    plan_ = fftw_plan_r2r_3d(n_, n_, n_, buf_.data(), buf_.data(),
                             FFTW_RODFT00, FFTW_RODFT00, FFTW_RODFT00,
                             FFTW_ESTIMATE);
  }
  ~DstPreconditioner() { fftw_destroy_plan(plan_); }
  DstPreconditioner(const DstPreconditioner&) = delete;
  DstPreconditioner& operator=(const DstPreconditioner&) = delete;

  void apply(const MatrixXcd& in, MatrixXcd& out) {
    out.resize(in.rows(), in.cols());
    const std::size_t nn = buf_.size();
    for (Eigen::Index col = 0; col < in.cols(); ++col) {
      for (int c = 0; c < nc_; ++c) {
        for (int part = 0; part < 2; ++part) {
          const std::complex<double>* src = in.col(col).data();
          for (std::size_t i = 0; i < nn; ++i) {
            const auto& z = src[nc_ * i + c];
            buf_[i] = part == 0 ? z.real() : z.imag();
          }
          fftw_execute_r2r(plan_, buf_.data(), buf_.data());
          for (std::size_t i = 0; i < nn; ++i) buf_[i] *= inv_eig_[i];
          fftw_execute_r2r(plan_, buf_.data(), buf_.data());
          std::complex<double>* dst = out.col(col).data();
          for (std::size_t i = 0; i < nn; ++i) {
            auto& z = dst[nc_ * i + c];
            if (part == 0)
              z = std::complex<double>(buf_[i], z.imag());
            else
              z = std::complex<double>(z.real(), buf_[i]);
          }
        }
      }
    }
  }

private:
  int n_, nc_;
  double shift_;
  std::vector<double> buf_;
  std::vector<double> inv_eig_;
  fftw_plan plan_;
};

std::pair<NegativeSpectrum, SpectralProjector>
dense_negative_spectrum(const HamiltonianSpec& spec, const EigenSolveOptions& opts) {
  const std::size_t dim = spec.dimension();
  MatrixXcd Hm(dim, dim);
  std::vector<complexd> e(dim, complexd(0.0)), col(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    e[j] = 1.0;
    spec.apply(e.data(), col.data());
    e[j] = 0.0;
    for (std::size_t i = 0; i < dim; ++i) Hm(i, j) = col[i];
  }
  std::vector<double> w(dim);
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<int>(dim),
                            Hm.data(), static_cast<int>(dim), w.data());
  if (info != 0) throw std::runtime_error("dense eigensolver failed");

  NegativeSpectrum ns;
  SpectralProjector pr{spec.grid(), spec.components(), MatrixXcd(), {}, {}, true};
  int count = 0;
  while (count < static_cast<int>(dim) && w[count] < 0.0) ++count;
  ns.count = count;
  ns.converged = true;
  pr.vectors.resize(dim, count);
  for (int c = 0; c < count; ++c) {
    ns.eigenvalues.push_back(w[c]);
    ns.sum_negative += w[c];
    pr.vectors.col(c) = Hm.col(c);
    pr.eigenvalues.push_back(w[c]);
    pr.residuals.push_back(0.0);
    if (std::abs(w[c]) < 10.0 * opts.tol) ns.boundary_ambiguous = true;
  }
  if (count < static_cast<int>(dim) && std::abs(w[count]) < 10.0 * opts.tol)
    ns.boundary_ambiguous = true;
  pr.converged = true;
  return {ns, pr};
}

} // namespace

std::pair<NegativeSpectrum, SpectralProjector>
negative_spectrum_full(const HamiltonianSpec& spec, const EigenSolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("negative_spectrum: tol must be > 0");
  const std::size_t dim = spec.dimension();
  if (dim <= opts.dense_threshold) return dense_negative_spectrum(spec, opts);

  BlockOperator Hop = [&spec](const MatrixXcd& in, MatrixXcd& out) {
    out.resize(in.rows(), in.cols());
    for (Eigen::Index c = 0; c < in.cols(); ++c)
      spec.apply(in.col(c).data(), out.col(c).data());
  };

  double vmax = 0.0;
  for (double v : spec.potential().values()) vmax = std::max(vmax, v);
  double shift = 1.0 + vmax +
      (spec.kind() == OperatorKind::Pauli ? spec.h() * spec.magnetic_field().max_norm() : 0.0);
  if (const char* env = std::getenv("MPLAB_DST_SHIFT")) shift = std::atof(env);
  DstPreconditioner dst(spec.grid(), spec.components(), spec.h(), shift);
  BlockOperator Mop = [&dst](const MatrixXcd& in, MatrixXcd& out) { dst.apply(in, out); };

  MatrixXcd locked(dim, 0);
  std::vector<double> locked_vals;
  std::vector<double> locked_res;
  double resmax = 0.0;
  bool all_converged = true;

  int block = opts.initial_block;
  if (opts.warm_start && opts.warm_start->vectors.rows() == static_cast<Eigen::Index>(dim))
    block = std::max(block, static_cast<int>(opts.warm_start->vectors.cols()) + 2);

  std::uint64_t round_seed = opts.seed;
  bool first_round = true;
  const double guard_tol = std::max(100.0 * opts.tol, 1e-5);
  while (true) {
    LobpcgOptions lo;
    lo.tol = opts.tol;
    lo.max_iterations = opts.max_iterations;
    lo.seed = round_seed++;
    lo.guard_level = 0.0;          // only the negative part needs full accuracy
    lo.guard_tol = guard_tol;
    lo.floor_resid = 64.0 * std::numeric_limits<double>::epsilon() * spec.spectral_upper_bound();
    const MatrixXcd* warm = nullptr;
    if (first_round && opts.warm_start &&
        opts.warm_start->vectors.rows() == static_cast<Eigen::Index>(dim))
      warm = &opts.warm_start->vectors;
    LobpcgReport rep =
        lobpcg_lowest(Hop, dim, block, lo, opts.use_preconditioner ? &Mop : nullptr,
                      locked.cols() ? &locked : nullptr, warm);
    first_round = false;
    all_converged = all_converged && rep.converged;

    MatrixXcd grown(dim, locked.cols() + rep.eigenvectors.cols());
    grown << locked, rep.eigenvectors;
    locked = grown;
    for (int c = 0; c < rep.eigenvalues.size(); ++c) {
      locked_vals.push_back(rep.eigenvalues(c));
      locked_res.push_back(rep.residuals(c));
      if (rep.eigenvalues(c) < 0.0) resmax = std::max(resmax, rep.residuals(c));
    }

    const double top = locked_vals.back();
    if (top >= 0.0) break;
    if (static_cast<int>(locked_vals.size()) >= opts.max_states) {
      all_converged = false; // spectral search hit the cap while still negative
      break;
    }
    if (!rep.converged) break;
    block = std::min(2 * block, 32);
  }

  NegativeSpectrum ns;
  SpectralProjector pr{spec.grid(), spec.components(), MatrixXcd(), {}, {}, all_converged};
  int count = 0;
  for (double v : locked_vals)
    if (v < 0.0) ++count;
  // locking order is ascending across rounds by construction
  ns.count = count;
  ns.converged = all_converged;
  ns.residual_max = resmax;
  pr.vectors.resize(dim, count);
  for (int c = 0; c < count; ++c) {
    ns.eigenvalues.push_back(locked_vals[c]);
    ns.sum_negative += locked_vals[c];
    pr.vectors.col(c) = locked.col(c);
    pr.eigenvalues.push_back(locked_vals[c]);
    pr.residuals.push_back(locked_res[c]);
    if (std::abs(locked_vals[c]) < 10.0 * opts.tol) ns.boundary_ambiguous = true;
  }
  for (double v : locked_vals)
    if (v >= 0.0 && v < std::max(10.0 * opts.tol, 10.0 * guard_tol)) ns.boundary_ambiguous = true;
  return {ns, pr};
}

NegativeSpectrum negative_spectrum(const HamiltonianSpec& spec, double tol) {
  EigenSolveOptions opts;
  opts.tol = tol;
  return negative_spectrum_full(spec, opts).first;
}

ScalarField density(const SpectralProjector& P) {
  if (!P.converged) throw std::invalid_argument("density: projector not converged");
  ScalarField rho(P.grid);
  const double inv_vol = 1.0 / P.grid.cell_volume();
  const std::size_t nn = P.grid.node_count();
  for (Eigen::Index c = 0; c < P.vectors.cols(); ++c) {
    const complexd* v = P.vectors.col(c).data();
    for (std::size_t i = 0; i < nn; ++i) {
      double s = 0.0;
      for (int comp = 0; comp < P.components; ++comp) s += std::norm(v[P.components * i + comp]);
      rho[i] += s * inv_vol;
    }
  }
  return rho;
}

VectorField current(const SpectralProjector& P, const HamiltonianSpec& spec) {
  if (P.grid != spec.grid() || P.components != spec.components())
    throw std::invalid_argument("current: projector does not match spec");
  const Grid3& g = spec.grid();
  const int n = g.n();
  const int nc = P.components;
  const double h = spec.h();
  const double a = g.spacing();
  const long step[3] = {1, n, static_cast<long>(n) * n};

  // link accumulations: w(x,axis) = sum_occ Im[u(x,axis) conj(phi(x)) phi(x+e)]
  VectorField link(g);
  for (Eigen::Index col = 0; col < P.vectors.cols(); ++col) {
    const complexd* v = P.vectors.col(col).data();
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const std::size_t idx = g.index(i, j, k);
          const int ijk[3] = {i, j, k};
          for (int axis = 0; axis < 3; ++axis) {
            if (ijk[axis] == n - 1) continue;
            const std::size_t nb = idx + step[axis];
            complexd s(0.0);
            for (int c = 0; c < nc; ++c)
              s += std::conj(v[nc * idx + c]) * v[nc * nb + c];
            link.comp(idx, axis) += std::imag(spec.phases().forward(idx, axis) * s);
          }
        }
  }

  // plain partial dE/dA_j(y): (h/a) * (incoming + outgoing link terms)
  VectorField plain(g);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = g.index(i, j, k);
        const int ijk[3] = {i, j, k};
        for (int axis = 0; axis < 3; ++axis) {
          double s = 0.0;
          if (ijk[axis] < n - 1) s += link.comp(idx, axis);
          if (ijk[axis] > 0) s += link.comp(idx - step[axis], axis);
          plain.comp(idx, axis) = (h / a) * s;
        }
      }

  if (spec.kind() == OperatorKind::Pauli) {
    // Zeeman channel: d/dA of h * sum_x m(x).curl(A)(x) = h * C^T m
    VectorField m(g);
    for (Eigen::Index col = 0; col < P.vectors.cols(); ++col) {
      const complexd* v = P.vectors.col(col).data();
      for (std::size_t i = 0; i < g.node_count(); ++i) {
        const complexd up = v[2 * i], dn = v[2 * i + 1];
        const complexd cross = std::conj(up) * dn;
        m.comp(i, 0) += 2.0 * cross.real();
        m.comp(i, 1) += 2.0 * cross.imag();
        m.comp(i, 2) += std::norm(up) - std::norm(dn);
      }
    }
    VectorField zee = curl_transpose(m);
    zee *= h;
    plain += zee;
  }

  // J = -(1/2) W^{-1} dE/dA, W the quadrature weights
  VectorField J(g);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = g.index(i, j, k);
        const double w = g.weight(i, j, k);
        for (int c = 0; c < 3; ++c) J.comp(idx, c) = -0.5 * plain.comp(idx, c) / w;
      }
  return J;
}

void write_eigenvalue_csv(const NegativeSpectrum& s, const SpectralProjector& P,
                          std::ostream& os) {
  os << "index,eigenvalue,residual\n";
  char buf[96];
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    double res = i < P.residuals.size() ? P.residuals[i] : 0.0;
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, s.eigenvalues[i], res);
    os << buf;
  }
}

} // namespace mplab
