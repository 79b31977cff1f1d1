#include "mplab/hamiltonian.hpp"

#include <cmath>
#include <random>

#include "mplab/differential.hpp"

namespace mplab {

LinkPhases::LinkPhases(const Grid3& grid, const VectorField& A, double h)
    : grid_(grid), u_(3 * grid.node_count(), complexd(1.0, 0.0)), trivial_(false) {
  require_same_grid(grid, A.grid(), "LinkPhases");
  const int n = grid.n();
  const double a = grid.spacing();
  const int step[3] = {1, n, n * n};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = grid.index(i, j, k);
        const int ijk[3] = {i, j, k};
        for (int axis = 0; axis < 3; ++axis) {
          if (ijk[axis] == n - 1) continue; // no outgoing link
          const std::size_t nb = idx + step[axis];
          const double theta = (a / h) * 0.5 * (A.comp(idx, axis) + A.comp(nb, axis));
          u_[3 * idx + axis] = std::polar(1.0, theta);
        }
      }
}

LinkPhases::LinkPhases(const Grid3& grid)
    : grid_(grid), u_(3 * grid.node_count(), complexd(1.0, 0.0)), trivial_(true) {}

void LinkPhases::gauge_shift(const ScalarField& eta, double h) {
  require_same_grid(grid_, eta.grid(), "LinkPhases::gauge_shift");
  const int n = grid_.n();
  const int step[3] = {1, n, n * n};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = grid_.index(i, j, k);
        const int ijk[3] = {i, j, k};
        for (int axis = 0; axis < 3; ++axis) {
          if (ijk[axis] == n - 1) continue;
          const double dtheta = (eta[idx + step[axis]] - eta[idx]) / h;
          u_[3 * idx + axis] *= std::polar(1.0, dtheta);
        }
      }
  trivial_ = false;
}

HamiltonianSpec::HamiltonianSpec(OperatorKind kind, double h, ScalarField V,
                                 std::optional<VectorField> A)
    : kind_(kind), h_(h), V_(std::move(V)), A_(std::move(A)),
      B_(V_.grid()),
      phases_(A_ ? LinkPhases(V_.grid(), *A_, h) : LinkPhases(V_.grid())) {
  if (!(h > 0.0)) throw std::invalid_argument("HamiltonianSpec: h must be > 0");
  if (A_) {
    require_same_grid(V_.grid(), A_->grid(), "HamiltonianSpec");
    B_ = curl(*A_);
  }
}

void HamiltonianSpec::apply(const complexd* in, complexd* out) const {
  const Grid3& g = V_.grid();
  const int n = g.n();
  const int nc = components();
  const double t = (h_ / g.spacing()) * (h_ / g.spacing());
  const bool magnetic = !phases_.trivial();
  const bool pauli = kind_ == OperatorKind::Pauli;
  const long step[3] = {1, n, static_cast<long>(n) * n};

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = g.index(i, j, k);
        const int ijk[3] = {i, j, k};
        for (int c = 0; c < nc; ++c) {
          const std::size_t me = static_cast<std::size_t>(nc) * idx + c;
          complexd acc = 6.0 * in[me];
          for (int axis = 0; axis < 3; ++axis) {
            if (ijk[axis] < n - 1) {
              const std::size_t nb = me + static_cast<std::size_t>(nc) * step[axis];
              acc -= magnetic ? phases_.forward(idx, axis) * in[nb] : in[nb];
            }
            if (ijk[axis] > 0) {
              const std::size_t pr = me - static_cast<std::size_t>(nc) * step[axis];
              const std::size_t pidx = idx - step[axis];
              acc -= magnetic ? std::conj(phases_.forward(pidx, axis)) * in[pr] : in[pr];
            }
          }
          out[me] = t * acc - V_[idx] * in[me];
        }
        if (pauli && magnetic) {
          const std::size_t up = 2 * idx, dn = 2 * idx + 1;
          const double b1 = B_.comp(idx, 0), b2 = B_.comp(idx, 1), b3 = B_.comp(idx, 2);
          const complexd bm(b1, -b2), bp(b1, b2);
          out[up] += h_ * (b3 * in[up] + bm * in[dn]);
          out[dn] += h_ * (bp * in[up] - b3 * in[dn]);
        }
      }
  }
}

SpinorField HamiltonianSpec::apply(const SpinorField& psi) const {
  if (kind_ != OperatorKind::Pauli)
    throw std::invalid_argument("apply(SpinorField): spec is not a Pauli operator");
  require_same_grid(grid(), psi.grid(), "HamiltonianSpec::apply");
  SpinorField out(psi.grid());
  apply(psi.values().data(), out.values().data());
  return out;
}

HamiltonianSpec HamiltonianSpec::gauge_shifted(const ScalarField& eta) const {
  HamiltonianSpec out = *this;
  LinkPhases shifted = phases_;
  if (shifted.trivial()) shifted = LinkPhases(grid(), VectorField(grid()), h_);
  shifted.gauge_shift(eta, h_);
  out.phases_ = shifted;
  return out;
}

double HamiltonianSpec::spectral_upper_bound() const {
  const double t = (h_ / grid().spacing()) * (h_ / grid().spacing());
  double vmin = 0.0;
  for (double v : V_.values()) vmin = std::min(vmin, v);
  double zeeman = (kind_ == OperatorKind::Pauli) ? h_ * B_.max_norm() : 0.0;
  return 12.0 * t - vmin + zeeman;
}

double hermiticity_check(const HamiltonianSpec& spec, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("hermiticity_check: trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t dim = spec.dimension();
  std::vector<complexd> phi(dim), psi(dim), hphi(dim), hpsi(dim);
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    for (auto& v : phi) v = complexd(gauss(rng), gauss(rng));
    for (auto& v : psi) v = complexd(gauss(rng), gauss(rng));
    spec.apply(phi.data(), hphi.data());
    spec.apply(psi.data(), hpsi.data());
    complexd a(0.0), b(0.0);
    double np = 0.0, nq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      a += std::conj(phi[i]) * hpsi[i];
      b += std::conj(psi[i]) * hphi[i];
      np += std::norm(phi[i]);
      nq += std::norm(psi[i]);
    }
    worst = std::max(worst, std::abs(a - std::conj(b)) / std::sqrt(np * nq));
  }
  return worst;
}

} // namespace mplab
